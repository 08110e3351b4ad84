"""Builders for the named example structures and operator-identity residuals.

Each operator kind comes with (a) a quasi-twilled builder whose output passes
check_pc, and (b) an operator residual computed by expanding the printed
identity directly from brackets and actions, WITHOUT the quasi-twilled
machinery.  dictionary_check crosses the two: the named identity holds iff
the corresponding deformation-map residual vanishes.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .hopf import HElem, InputError, LieAlgebra
from .ptensor import FreeModule, MElem, PTElem, canonicalize, permute
from .cochains import Cochain, MixedMap, sorted_tuples
from .structures import (
    LiePseudoalgebra,
    QuasiTwilled,
    Representation,
    check_lie,
    check_pc,
    eta_from_matched_action,
)
from .deformation import (
    HModuleMap,
    SWAP2,
    TYPE_I,
    TYPE_II,
    _apply_map_pt,
    dmap1_residual,
    dmap2_residual,
)
from .cohomology import CLASSICAL, ce_differential0, handle_for, PLAIN

MODIFIED_R = "modified_r"
CROSSED_HOM = "crossed_hom"
DERIVATION = "derivation"
HOMOMORPHISM = "homomorphism"
RELATIVE_RB = "relative_rb"
O_OPERATOR = "o_operator"
TWISTED_RB = "twisted_rb"
REYNOLDS = "reynolds"
REYNOLDS_CLASSICAL = "reynolds_classical"
MATCHED_PAIR_DEF = "matched_pair_def"

TYPE_I_KINDS = (MODIFIED_R, CROSSED_HOM, DERIVATION, HOMOMORPHISM)
TYPE_II_KINDS = (
    RELATIVE_RB,
    O_OPERATOR,
    TWISTED_RB,
    REYNOLDS,
    REYNOLDS_CLASSICAL,
    MATCHED_PAIR_DEF,
)
ALL_KINDS = TYPE_I_KINDS + TYPE_II_KINDS


# -- base ingredients -------------------------------------------------------------


def polynomial_hopf() -> LieAlgebra:
    """H = Q[d], the enveloping algebra of the abelian line."""
    return LieAlgebra.abelian(["d"])


def nonabelian_2dim() -> LieAlgebra:
    """The 2-dim solvable algebra [a1, a2] = a2."""
    return LieAlgebra(["a1", "a2"], {(0, 1): {1: Fraction(1)}})


def sl2_constants() -> dict:
    """sl2 with basis (e, f, h): [e,f]=h, [h,e]=2e, [h,f]=-2f."""
    return {
        (0, 1): {2: Fraction(1)},
        (2, 0): {0: Fraction(2)},
        (2, 1): {1: Fraction(-2)},
    }


def virasoro(name="g", basis="x", alg=None) -> LiePseudoalgebra:
    """Rank-1 pseudoalgebra over Q[d] with [x*x] = (d(x)1 - 1(x)d) (x)_H x."""
    alg = alg or polynomial_hopf()
    m = FreeModule(name, [basis], alg)
    val = canonicalize(
        m,
        2,
        [(((1,), (0,)), (0,), 0, Fraction(1)), (((0,), (1,)), (0,), 0, Fraction(-1))],
    )
    return LiePseudoalgebra(m, Cochain(2, m, m, {(0, 0): val}))


def current(base: LieAlgebra, alg: LieAlgebra, name="cur") -> LiePseudoalgebra:
    """Cur(b) = H (x) b with [e_i * e_j] = (1 (x) 1) (x)_H [b-bracket]."""
    m = FreeModule(name, [f"e_{n}" for n in base.names], alg)
    zero2 = (alg.zero_index, alg.zero_index)
    table = {}
    for i, j in sorted_tuples(base.dim, 2):
        row = base.bracket(i, j)
        if not row:
            continue
        terms = {((alg.zero_index,), alg.zero_index, k): c for k, c in row.items()}
        table[(i, j)] = PTElem(m, 2, terms)
    return LiePseudoalgebra(m, Cochain(2, m, m, table))


def abelian_algebra(name, basis_names, alg) -> LiePseudoalgebra:
    m = FreeModule(name, basis_names, alg)
    return LiePseudoalgebra(m, Cochain.zero(2, m, m))


def clone_bracket(P: LiePseudoalgebra, name: str) -> LiePseudoalgebra:
    """A fresh module carrying the same bracket table."""
    m = FreeModule(name, [f"{b}'" for b in P.module.basis], P.module.alg)
    table = {t: v.coerce(m) for t, v in P.bracket.table.items()}
    return LiePseudoalgebra(m, Cochain(2, m, m, table), validate=False)


def direct_sum_algebras(P1: LiePseudoalgebra, P2: LiePseudoalgebra, name="gg") -> LiePseudoalgebra:
    """Commuting sum of two pseudoalgebras as one rank-(r1+r2) algebra."""
    m = FreeModule(
        name,
        [f"{b}.1" for b in P1.module.basis] + [f"{b}.2" for b in P2.module.basis],
        P1.module.alg,
    )
    r1 = P1.module.rank
    table = {}
    for t, v in P1.bracket.table.items():
        table[t] = v.coerce(m)
    for t, v in P2.bracket.table.items():
        table[tuple(i + r1 for i in t)] = v.coerce(m, lambda k: k + r1)
    return LiePseudoalgebra(m, Cochain(2, m, m, table), validate=False)


def adjoint_action(P: LiePseudoalgebra, hmod: FreeModule) -> MixedMap:
    """The bracket of P reinterpreted as an action on a same-rank module."""
    if hmod.rank != P.module.rank:
        raise InputError("adjoint action needs a same-rank module")
    table = {}
    for i in range(P.module.rank):
        for j in range(P.module.rank):
            v = P.bracket.value((i, j))
            if not v.is_zero():
                table[(i, j)] = v.coerce(hmod)
    return MixedMap(P.module, hmod, hmod, table)


def diagonal_action(P: LiePseudoalgebra, copies: LiePseudoalgebra) -> MixedMap:
    """ad (+) ad: P acting componentwise on a direct sum of copies of itself."""
    hmod = copies.module
    r = P.module.rank
    if hmod.rank % r:
        raise InputError("module rank must be a multiple of the algebra rank")
    table = {}
    for i in range(r):
        for block in range(hmod.rank // r):
            for j in range(r):
                v = P.bracket.value((i, j))
                if not v.is_zero():
                    table[(i, block * r + j)] = v.coerce(
                        hmod, lambda k, b=block: b * r + k
                    )
    return MixedMap(P.module, hmod, hmod, table)


# -- structure builders -----------------------------------------------------------


def build(kind: str, ingredients: dict) -> QuasiTwilled:
    """Assemble the quasi-twilled structure of the given kind; PC-validated.

    Ingredient axioms (Lie, action, cocycle) are what check_pc verifies on the
    assembled tuple, so a bad ingredient surfaces as a labeled residual.
    """
    if kind == MODIFIED_R:
        P = ingredients["algebra"]
        p = Fraction(ingredients["weight"])
        hP = clone_bracket(P, P.module.name + "_h")
        eta = MixedMap(
            P.module,
            hP.module,
            P.module,
            {
                (i, j): P.bracket.value((i, j))
                for i in range(P.module.rank)
                for j in range(P.module.rank)
                if not P.bracket.value((i, j)).is_zero()
            },
        )
        theta = Cochain(
            2,
            P.module,
            hP.module,
            {t: v.coerce(hP.module).scale(p) for t, v in P.bracket.table.items()},
        )
        Q = QuasiTwilled(P.module, hP.module, eta=eta, mu=hP.bracket, theta=theta)
    elif kind in (CROSSED_HOM, RELATIVE_RB):
        gP, hP = ingredients["algebra"], ingredients["coefficients"]
        rho = ingredients["action"]
        p = Fraction(ingredients["weight"])
        Q = QuasiTwilled(
            gP.module,
            hP.module,
            pi=gP.bracket,
            rho=rho,
            mu=hP.bracket.scale(p),
        )
    elif kind in (DERIVATION, O_OPERATOR):
        gP, M, rho = ingredients["algebra"], ingredients["module"], ingredients["action"]
        Q = QuasiTwilled(gP.module, M, pi=gP.bracket, rho=rho)
    elif kind == HOMOMORPHISM:
        gP, hP = ingredients["algebra"], ingredients["coefficients"]
        Q = QuasiTwilled(gP.module, hP.module, pi=gP.bracket, mu=hP.bracket)
    elif kind in (TWISTED_RB, REYNOLDS, REYNOLDS_CLASSICAL):
        gP, M, rho = ingredients["algebra"], ingredients["module"], ingredients["action"]
        if kind == REYNOLDS:
            omega = Cochain(
                2, gP.module, M, {t: v.coerce(M) for t, v in gP.bracket.table.items()}
            )
        elif kind == REYNOLDS_CLASSICAL:
            omega = Cochain(
                2,
                gP.module,
                M,
                {t: v.coerce(M).scale(-1) for t, v in gP.bracket.table.items()},
            )
        else:
            omega = ingredients["cocycle"]
        _validate_cocycle(gP, M, rho, omega)
        Q = QuasiTwilled(gP.module, M, pi=gP.bracket, rho=rho, theta=omega)
    elif kind == MATCHED_PAIR_DEF:
        gP, hP = ingredients["algebra"], ingredients["coefficients"]
        rho = ingredients.get("action") or MixedMap.zero(gP.module, hP.module, hP.module)
        eta = ingredients.get("coaction") or MixedMap.zero(gP.module, hP.module, gP.module)
        Q = QuasiTwilled(gP.module, hP.module, pi=gP.bracket, rho=rho, mu=hP.bracket, eta=eta)
    else:
        raise InputError(f"unknown operator kind {kind!r}")
    report = check_pc(Q)
    if not report["ok"]:
        bad = {k: sorted(v) for k, v in report["residuals"].items() if v}
        raise InputError(f"ingredients violate the structure axioms: {bad}")
    return Q


def _validate_cocycle(gP, M, rho, omega):
    alg = LiePseudoalgebra(gP.module, gP.bracket, validate=False)
    rep = Representation(alg, M, rho)
    handle = handle_for(PLAIN, algebra=alg, rep=rep, convention=CLASSICAL, verify=False)
    d_omega = handle.diff(omega)
    if not d_omega.is_zero():
        raise InputError("the twisting term is not a 2-cocycle of the representation")


# -- operator residuals (independent expansions) ------------------------------------


def operator_residual(kind: str, ingredients: dict, m: HModuleMap) -> Cochain:
    """The printed operator identity's residual, expanded without Q machinery."""
    if kind == MODIFIED_R:
        P = ingredients["algebra"]
        p = Fraction(ingredients["weight"])
        br = P.bracket
        if (m.src, m.dst) != (P.module, P.module):
            m = _retarget(m, P.module, P.module)
        table = {}
        for t in sorted_tuples(P.module.rank, 2):
            x, y = P.module.elem(t[0]), P.module.elem(t[1])
            r = (
                br.eval([m(x), m(y)])
                - _apply_map_pt(br.eval([m(x), y]) + br.eval([x, m(y)]), m)
                + br.value(t).scale(p)
            )
            table[t] = r
        return Cochain(2, P.module, P.module, table)
    if kind in (CROSSED_HOM, DERIVATION):
        gP = ingredients["algebra"]
        rho = ingredients["action"]
        hmod = rho.hmod
        br_h = ingredients.get("coefficients")
        p = Fraction(ingredients.get("weight", 0))
        table = {}
        for t in sorted_tuples(gP.module.rank, 2):
            x, y = gP.module.elem(t[0]), gP.module.elem(t[1])
            r = (
                _apply_map_pt(gP.bracket.value(t), m)
                - rho.eval(x, m(y))
                + permute(rho.eval(y, m(x)), SWAP2)
            )
            if kind == CROSSED_HOM:
                r = r - br_h.bracket.eval([m(x), m(y)]).scale(p)
            table[t] = r
        return Cochain(2, gP.module, hmod, table)
    if kind == HOMOMORPHISM:
        gP, hP = ingredients["algebra"], ingredients["coefficients"]
        table = {}
        for t in sorted_tuples(gP.module.rank, 2):
            x, y = gP.module.elem(t[0]), gP.module.elem(t[1])
            table[t] = _apply_map_pt(gP.bracket.value(t), m) - hP.bracket.eval(
                [m(x), m(y)]
            )
        return Cochain(2, gP.module, hP.module, table)
    if kind in (RELATIVE_RB, O_OPERATOR):
        gP = ingredients["algebra"]
        rho = ingredients["action"]
        hmod = rho.hmod
        p = Fraction(ingredients.get("weight", 0))
        mu = ingredients["coefficients"].bracket if kind == RELATIVE_RB else None
        table = {}
        for t in sorted_tuples(hmod.rank, 2):
            u, v = hmod.elem(t[0]), hmod.elem(t[1])
            inner = rho.eval(m(u), v) - permute(rho.eval(m(v), u), SWAP2)
            if mu is not None:
                inner = inner + mu.value(t).scale(p)
            table[t] = gP.bracket.eval([m(u), m(v)]) - _apply_map_pt(inner, m)
        return Cochain(2, hmod, gP.module, table)
    if kind in (TWISTED_RB, REYNOLDS, REYNOLDS_CLASSICAL):
        gP = ingredients["algebra"]
        rho = ingredients["action"]
        hmod = rho.hmod
        if kind == TWISTED_RB:
            omega = ingredients["cocycle"]
        else:
            sign = 1 if kind == REYNOLDS else -1
            omega = Cochain(
                2,
                gP.module,
                hmod,
                {t: v.coerce(hmod).scale(sign) for t, v in gP.bracket.table.items()},
            )
        table = {}
        for t in sorted_tuples(hmod.rank, 2):
            u, v = hmod.elem(t[0]), hmod.elem(t[1])
            inner = (
                rho.eval(m(u), v)
                - permute(rho.eval(m(v), u), SWAP2)
                + omega.eval([m(u), m(v)])
            )
            table[t] = gP.bracket.eval([m(u), m(v)]) - _apply_map_pt(inner, m)
        return Cochain(2, hmod, gP.module, table)
    if kind == MATCHED_PAIR_DEF:
        gP, hP = ingredients["algebra"], ingredients["coefficients"]
        rho = ingredients.get("action") or MixedMap.zero(gP.module, hP.module, hP.module)
        eta = ingredients.get("coaction") or MixedMap.zero(gP.module, hP.module, gP.module)
        table = {}
        for t in sorted_tuples(hP.module.rank, 2):
            u, v = hP.module.elem(t[0]), hP.module.elem(t[1])
            # the matched-pair coaction enters through its orientation
            # relation eta_mp(u (x) y) = -(12) eta(y (x) u)
            eta_u_Tv = permute(eta.eval(m(v), u), SWAP2).scale(-1)
            eta_v_Tu = permute(eta.eval(m(u), v), SWAP2).scale(-1)
            lhs = gP.bracket.eval([m(u), m(v)]) + eta_u_Tv - permute(eta_v_Tu, SWAP2)
            rhs = (
                hP.bracket.value(t)
                + rho.eval(m(u), v)
                - permute(rho.eval(m(v), u), SWAP2)
            )
            table[t] = lhs - _apply_map_pt(rhs, m)
        return Cochain(2, hP.module, gP.module, table)
    raise InputError(f"unknown operator kind {kind!r}")


def _retarget(m: HModuleMap, src, dst) -> HModuleMap:
    """Reinterpret a map between same-rank modules (copy relabelling)."""
    rows = {}
    for i, row in m.rows.items():
        rows[i] = MElem(dst, dict(row.coords))
    return HModuleMap(src, dst, rows)


def deformation_residual(kind: str, Q: QuasiTwilled, m: HModuleMap) -> Cochain:
    if kind in TYPE_I_KINDS:
        return dmap1_residual(Q, m)
    return dmap2_residual(Q, m)


def map_orientation(kind: str, Q: QuasiTwilled):
    return (Q.g, Q.h) if kind in TYPE_I_KINDS else (Q.h, Q.g)


def random_hmap(rng, src: FreeModule, dst: FreeModule, max_deg=2) -> HModuleMap:
    """Seeded random H-linear map with small integral coefficients."""
    alg = src.alg
    rows = {}
    for i in range(src.rank):
        coords = {}
        for j in range(dst.rank):
            terms = {}
            for _ in range(2):
                deg = rng.randint(0, max_deg)
                mi = [0] * alg.dim
                for _k in range(deg):
                    mi[rng.randrange(alg.dim)] += 1
                c = rng.choice([-2, -1, 0, 1, 2])
                if c:
                    key = tuple(mi)
                    terms[key] = terms.get(key, Fraction(0)) + Fraction(c)
            h = HElem(alg, terms)
            if h:
                coords[j] = h
        if coords:
            rows[i] = MElem(dst, coords)
    return HModuleMap(src, dst, rows)


def dictionary_check(kind: str, ingredients: dict, m: HModuleMap, rng=None, trials=0, Q=None) -> dict:
    """operator identity residual = 0 <=> deformation-map residual = 0.

    Checked on the given map; with an rng, also on `trials` seeded random
    maps of the right orientation.  The residual VALUES are also compared
    termwise (the dictionary is an equality, not just a verdict match).
    """
    if Q is None:
        Q = build(kind, ingredients)
    src, dst = map_orientation(kind, Q)

    def one(mp):
        op = operator_residual(kind, ingredients, mp)
        df = deformation_residual(kind, Q, mp)
        same_verdict = op.is_zero() == df.is_zero()
        return same_verdict, op, df

    ok, op, df = one(m)
    agree_all = ok
    for _ in range(trials):
        mp = random_hmap(rng, src, dst)
        okk, _, _ = one(mp)
        agree_all = agree_all and okk
    return {"ok": agree_all, "operator_residual": op, "deformation_residual": df}


# -- curated instances --------------------------------------------------------------


def _vir_pair():
    g = virasoro("g", "x")
    h = clone_bracket(g, "h")
    return g, h


def builtin(name: str):
    """Deterministic named bundles; every validity check passes at load."""
    alg = polynomial_hopf()
    if name == "virasoro":
        return virasoro()
    if name == "cur_sl2":
        return current(LieAlgebra(["e", "f", "h"], sl2_constants()), alg, name="cur_sl2")
    if name == "cur_2dim_nonabelian":
        b2 = nonabelian_2dim()
        return current(b2, b2, name="cur_b2")
    if name == "rank2_type_i":
        g = virasoro("g", "u")
        h = abelian_algebra("h", ["x"], alg)
        return QuasiTwilled(g.module, h.module, pi=g.bracket)
    if name == "rank2_type_ii":
        g = abelian_algebra("g", ["u"], alg)
        h = abelian_algebra("h", ["x"], alg)
        eta = MixedMap(
            g.module,
            h.module,
            g.module,
            {(0, 0): PTElem(g.module, 2, {(((0,),), (0,), 0): Fraction(1)})},
        )
        return QuasiTwilled(g.module, h.module, eta=eta)
    if name == "rank2_type_iii":
        # the derived instance b = 1, C = 1(x)1 (so pi = b(C - (12)C) = 0)
        g = abelian_algebra("g", ["u"], alg)
        h = abelian_algebra("h", ["x"], alg)
        C_u = PTElem(g.module, 2, {(((0,),), (0,), 0): Fraction(1)})
        C_x = C_u.coerce(h.module)
        return QuasiTwilled(
            g.module,
            h.module,
            rho=MixedMap(g.module, h.module, h.module, {(0, 0): C_x}),
            eta=MixedMap(g.module, h.module, g.module, {(0, 0): C_u}),
        )
    if name == "modified_r_demo":
        g = virasoro()
        ingredients = {"algebra": g, "weight": Fraction(4)}
        Q = build(MODIFIED_R, ingredients)
        D = HModuleMap.scalar(Q.g, Q.h, Fraction(2))
        return {"kind": MODIFIED_R, "ingredients": ingredients, "Q": Q, "map": D}
    if name == "reynolds_demo":
        g = virasoro()
        M = FreeModule("m", ["xm"], alg)
        ingredients = {
            "algebra": g,
            "module": M,
            "action": adjoint_action(g, M),
        }
        Q = build(REYNOLDS, ingredients)
        T = HModuleMap.scalar(Q.h, Q.g, Fraction(-1))
        return {"kind": REYNOLDS, "ingredients": ingredients, "Q": Q, "map": T}
    raise InputError(f"unknown builtin {name!r}")


def demo_bundle(kind: str):
    """Canonical (ingredients, Q, valid map) bundle for each operator kind."""
    alg = polynomial_hopf()
    if kind == MODIFIED_R:
        return builtin("modified_r_demo")
    if kind == CROSSED_HOM:
        g, h = _vir_pair()
        ing = {
            "algebra": g,
            "coefficients": h,
            "action": adjoint_action(g, h.module),
            "weight": Fraction(1),
        }
        Q = build(kind, ing)
        D = HModuleMap.scalar(Q.g, Q.h, Fraction(-1))  # c(1 + p c) = 0 at c = -1
        return {"kind": kind, "ingredients": ing, "Q": Q, "map": D}
    if kind == DERIVATION:
        g = virasoro()
        M = FreeModule("m", ["xm"], alg)
        ing = {"algebra": g, "module": M, "action": adjoint_action(g, M)}
        Q = build(kind, ing)
        return {"kind": kind, "ingredients": ing, "Q": Q, "map": HModuleMap.zero(Q.g, Q.h)}
    if kind == HOMOMORPHISM:
        g, h = _vir_pair()
        ing = {"algebra": g, "coefficients": h}
        Q = build(kind, ing)
        return {
            "kind": kind,
            "ingredients": ing,
            "Q": Q,
            "map": HModuleMap.scalar(Q.g, Q.h, Fraction(1)),
        }
    if kind == RELATIVE_RB:
        g = virasoro()
        hh = direct_sum_algebras(virasoro("v1", "x1"), virasoro("v2", "x2"), name="h2")
        ing = {
            "algebra": g,
            "coefficients": hh,
            "action": diagonal_action(g, hh),
            "weight": Fraction(2),
        }
        Q = build(kind, ing)
        # T = diag(-p, 0): c^2 + pc = 0 on the supported block, cross terms die
        T = HModuleMap(Q.h, Q.g, {0: Q.g.elem(0).scale(Fraction(-2))})
        return {"kind": kind, "ingredients": ing, "Q": Q, "map": T}
    if kind == O_OPERATOR:
        g = virasoro()
        M = FreeModule("m", ["xm"], alg)
        ing = {"algebra": g, "module": M, "action": adjoint_action(g, M)}
        Q = build(kind, ing)
        return {"kind": kind, "ingredients": ing, "Q": Q, "map": HModuleMap.zero(Q.h, Q.g)}
    if kind == TWISTED_RB:
        g = virasoro()
        M = FreeModule("m", ["xm"], alg)
        rho = adjoint_action(g, M)
        # omega = -d_CE(id): makes the identity map a type I deformation map
        # and T = id a twisted Rota-Baxter operator.
        ident = HModuleMap.scalar(g.module, M, Fraction(1))
        alg_plain = LiePseudoalgebra(g.module, g.bracket, validate=False)
        rep = Representation(alg_plain, M, rho)
        omega = _minus_d_of_map(alg_plain, rep, ident)
        ing = {"algebra": g, "module": M, "action": rho, "cocycle": omega}
        Q = build(kind, ing)
        T = HModuleMap.scalar(Q.h, Q.g, Fraction(1))
        return {"kind": kind, "ingredients": ing, "Q": Q, "map": T}
    if kind in (REYNOLDS, REYNOLDS_CLASSICAL):
        g = virasoro()
        M = FreeModule("m", ["xm"], alg)
        ing = {"algebra": g, "module": M, "action": adjoint_action(g, M)}
        Q = build(kind, ing)
        c = Fraction(-1) if kind == REYNOLDS else Fraction(1)
        T = HModuleMap.scalar(Q.h, Q.g, c)
        return {"kind": kind, "ingredients": ing, "Q": Q, "map": T}
    if kind == MATCHED_PAIR_DEF:
        g, h = _vir_pair()
        ing = {"algebra": g, "coefficients": h, "action": None, "coaction": None}
        Q = build(kind, ing)
        return {
            "kind": kind,
            "ingredients": ing,
            "Q": Q,
            "map": HModuleMap.scalar(Q.h, Q.g, Fraction(1)),
        }
    raise InputError(f"unknown operator kind {kind!r}")


def _minus_d_of_map(alg: LiePseudoalgebra, rep: Representation, D: HModuleMap) -> Cochain:
    """-d_CE(D) for a plain representation (exact 2-cocycle for the builder)."""
    from .cohomology import ce_differential

    return ce_differential(alg.bracket, rep.action, D.as_cochain(), CLASSICAL).scale(-1)


ZOO_NAMES = (
    "rank2_type_i",
    "rank2_type_ii",
    "rank2_type_iii",
) + ALL_KINDS


def zoo_structures():
    """Every curated quasi-twilled structure with its canonical maps.

    Returns a list of dicts {name, Q, type1 map or None, type2 map or None}.
    """
    out = []
    for name in ("rank2_type_i", "rank2_type_ii", "rank2_type_iii"):
        Q = builtin(name)
        entry = {"name": name, "Q": Q}
        D = HModuleMap.zero(Q.g, Q.h)
        entry["type1"] = D if dmap1_residual(Q, D).is_zero() else None
        T = HModuleMap.zero(Q.h, Q.g)
        entry["type2"] = T if dmap2_residual(Q, T).is_zero() else None
        out.append(entry)
    for kind in ALL_KINDS:
        bundle = demo_bundle(kind)
        Q = bundle["Q"]
        entry = {"name": kind, "Q": Q, "type1": None, "type2": None}
        if kind in TYPE_I_KINDS:
            entry["type1"] = bundle["map"]
            T0 = HModuleMap.zero(Q.h, Q.g)
            if dmap2_residual(Q, T0).is_zero():
                entry["type2"] = T0
        else:
            entry["type2"] = bundle["map"]
            D0 = HModuleMap.zero(Q.g, Q.h)
            if dmap1_residual(Q, D0).is_zero():
                entry["type1"] = D0
        out.append(entry)
    return out
