"""Chevalley-Eilenberg differentials for both deformation-map types.

A handle fixes (kind, induced bracket + action, sign convention).  The two
printed sign conventions differ by a global (-1)^{p-1} per degree:

    classical:  sum_i (-1)^{i+1} action-term + sum_{i<j} (-1)^{i+j} bracket-term
    shifted:    sum_i (-1)^{p+i}            + sum_{i<j} (-1)^{p+i+j-1}

Both square to zero whenever either does; the discriminating test is the
operator identity l1(f) = (-1)^{p-1} d(f), which the suite runs at p = 1, 2.
Every report names the convention in force.

Cohomology groups are computed on degree-truncated subcomplexes: exact kernel
ranks, and image dimensions within the truncation window (caveat flagged).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .hopf import InputError, mi_degree
from .ptensor import FreeModule, MElem, PTElem, permute, swap_dest
from .cochains import (
    Cochain,
    MixedMap,
    insert_raw,
    insert_value,
    random_cochain,
    sorted_tuples,
)
from .structures import LiePseudoalgebra, QuasiTwilled, Representation
from .deformation import (
    HModuleMap,
    SWAP2,
    TYPE_I,
    TYPE_II,
    TwistedLinfOps,
    _apply_map_pt,
    dmap1_residual,
    dmap2_residual,
    map_value,
    twist1_components,
    twist2_components,
)
from . import linalg

CLASSICAL = "classical"
SHIFTED = "shifted"  # the (-1)^{p+i} / (-1)^{p+i+j-1} printed variant
CONVENTIONS = (CLASSICAL, SHIFTED)

PLAIN = "plain"


class ResourceError(RuntimeError):
    """Truncation parameters exceed the configured budget."""


COORD_BUDGET = 60000


def _signs(convention: str, p: int):
    if convention == CLASSICAL:
        return (lambda i: (-1) ** (i + 1), lambda i, j: (-1) ** (i + j))
    if convention == SHIFTED:
        return (
            lambda i: (-1) ** (p + i),
            lambda i, j: (-1) ** (p + i + j - 1),
        )
    raise InputError(f"unknown sign convention {convention!r}")


def ce_differential(bracket: Cochain, action: MixedMap, f: Cochain, convention=CLASSICAL) -> Cochain:
    """The CE coboundary of f: C^p(A, M) -> C^{p+1}(A, M).

    bracket is the pseudobracket on A, action the A (x) M -> M map.  Each
    composite is slot-aligned: the action term puts the coefficient of x_i in
    slot i, the bracket term puts the pair (x_i, x_j) in slots (i, j).
    """
    A = bracket.source
    M = action.hmod
    if f.source != A or f.target != M:
        raise InputError("cochain has the wrong block signature for this complex")
    p = f.arity
    s1, s2 = _signs(convention, p)
    table = {}
    for t in sorted_tuples(A.rank, p + 1):
        acc = PTElem.zero(M, p + 1)
        for i in range(1, p + 2):
            rest = t[: i - 1] + t[i:]
            inner = f.value(rest)
            if inner.is_zero():
                continue
            comp = insert_raw(
                lambda k, _i=t[i - 1]: action.eval(A.elem(_i), M.elem(k)),
                2,
                M,
                1,
                inner,
            )
            # slots: (x_i, rest...) -> align x_i into slot i
            dest = [0] * (p + 1)
            dest[0] = i - 1
            for s in range(1, p + 1):
                dest[s] = s - 1 if s - 1 < i - 1 else s
            acc = acc + permute(comp, dest).scale(s1(i))
        for i in range(1, p + 1):
            for j in range(i + 1, p + 2):
                rest = tuple(t[k] for k in range(p + 1) if k not in (i - 1, j - 1))
                inner = bracket.value((t[i - 1], t[j - 1]))
                if inner.is_zero():
                    continue
                comp = insert_value(f, (), inner, rest)
                dest = [0] * (p + 1)
                dest[0], dest[1] = i - 1, j - 1
                spots = [s for s in range(p + 1) if s not in (i - 1, j - 1)]
                for s, spot in enumerate(spots):
                    dest[2 + s] = spot
                acc = acc + permute(comp, dest).scale(s2(i, j))
        if not acc.is_zero():
            table[t] = acc
    return Cochain(p + 1, A, M, table)


def ce_differential0(bracket: Cochain, action: MixedMap, u: MElem, convention=CLASSICAL) -> dict:
    """The coboundary of a 0-cochain (a module element).

    d(u)(x) = +- action(x (x) u) has a free coefficient on the x-slot, so it
    lives in the extended space Hom_H(A, H^2 (x)_H M), not in Hom_H(A, M);
    the value is returned as a table {i: arity-2 value}.  Its vanishing is
    the printed 1-cocycle condition.
    """
    A = bracket.source
    M = action.hmod
    if u.module != M:
        raise InputError("0-cochain must be a module element")
    s1, _ = _signs(convention, 0)
    table = {}
    for i in range(A.rank):
        v = action.eval(A.elem(i), u).scale(s1(1))
        if not v.is_zero():
            table[(i,)] = v
    return table


class CEComplexHandle:
    """A validated CE complex for one deformation map (or a plain rep).

    Construction verifies d o d = 0 at p = 1 on seeded random cochains under
    the active convention; a violation invalidates the handle immediately.
    """

    def __init__(self, kind, bracket, action, convention=CLASSICAL, verify=True, rng=None):
        self.kind = kind
        self.bracket = bracket
        self.action = action
        self.convention = convention
        if verify:
            import random

            rng = rng or random.Random(20240801)
            for _ in range(2):
                f = random_cochain(rng, bracket.source, action.hmod, 1, max_deg=2)
                dd = self.diff(self.diff(f))
                if not dd.is_zero():
                    raise InputError(
                        f"d o d != 0 at p=1 under convention {convention!r}"
                    )

    def diff(self, f: Cochain) -> Cochain:
        return ce_differential(self.bracket, self.action, f, self.convention)

    def diff0(self, u: MElem) -> dict:
        return ce_differential0(self.bracket, self.action, u, self.convention)

    def max_growth(self) -> int:
        act_deg = max((v.degree() for v in self.action.table.values()), default=0)
        return max(self.bracket.max_degree(), act_deg, 0)


def induced_rep_type1(Q: QuasiTwilled, D: HModuleMap):
    """(g, pi^D) as a Lie pseudoalgebra and rho^D as its representation on h."""
    if not dmap1_residual(Q, D).is_zero():
        raise InputError("induced structures need a valid type I map")
    Qt = twist1_components(Q, D)
    algebra = LiePseudoalgebra(Q.g, Qt.pi)  # validates skew + Jacobi
    rep = Representation(algebra, Q.h, Qt.rho)  # validates the module axiom
    return algebra, rep


def induced_rep_type2(Q: QuasiTwilled, T: HModuleMap):
    """(h, mu^T) as a Lie pseudoalgebra and zeta as its representation on g.

    zeta is the matched-pair reorientation of the twisted eta component:
    zeta(v (x) x) = -(12) eta^T(x (x) v).
    """
    if not dmap2_residual(Q, T).is_zero():
        raise InputError("induced structures need a valid type II map")
    res = twist2_components(Q, T)
    algebra = LiePseudoalgebra(Q.h, res.mu)
    table = {}
    for (i, j), v in res.eta.table.items():
        w = permute(v, SWAP2).scale(-1)
        if not w.is_zero():
            table[(j, i)] = w
    zeta = MixedMap(Q.h, Q.g, Q.g, table)
    rep = Representation(algebra, Q.g, zeta)
    return algebra, rep


def handle_for(kind, Q=None, M=None, algebra=None, rep=None, convention=CLASSICAL, verify=True):
    """Build the CE handle for a deformation map, or for a plain representation."""
    if kind == TYPE_I:
        alg, rp = induced_rep_type1(Q, M)
    elif kind == TYPE_II:
        alg, rp = induced_rep_type2(Q, M)
    elif kind == PLAIN:
        alg, rp = algebra, rep
    else:
        raise InputError("kind must be 'I', 'II' or 'plain'")
    return CEComplexHandle(kind, alg.bracket, rp.action, convention, verify=verify)


def consistency_l1_vs_d(kind, Q, M, f: Cochain) -> dict:
    """Prop-check: l1^M(f) = (-1)^{p-1} d(f); reports per sign convention."""
    tw = TwistedLinfOps(Q, M, kind)
    l1f = tw.l1(f)
    sign = (-1) ** (f.arity - 1)
    out = {"arity": f.arity}
    for conv in CONVENTIONS:
        h = handle_for(kind, Q, M, convention=conv, verify=False)
        out[conv] = l1f == h.diff(f).scale(sign)
    out["validated"] = [c for c in CONVENTIONS if out[c]]
    return out


# -- explicit low-degree cocycle conditions ---------------------------------------


def cocycle_check_type1(Q: QuasiTwilled, D: HModuleMap, f, n: int, convention=CLASSICAL) -> dict:
    """Closed-form 1-/2-cocycle conditions vs the differential route.

    n = 1: f is an element of h; closed iff
        rho(x, u) + mu(D x, u) - D(eta(x, u)) = 0 for all basis x.
    n = 2: f in C^1(g, h); the expanded rho^D/pi^D condition.
    Both the direct expansion and the ce_diff route are computed; the report
    carries their residuals and the agreement verdict.
    """
    handle = handle_for(TYPE_I, Q, D, convention=convention, verify=False)
    direct = {}
    if n == 1:
        u = f
        for i in range(Q.g.rank):
            x = Q.gx(i)
            r = (
                Q.rho.eval(x, u)
                + Q.mu.eval([D(x), u])
                - _apply_map_pt(Q.eta.eval(x, u), D)
            )
            if not r.is_zero():
                direct[(i,)] = r
        droute = handle.diff0(u)
        dr = {t: v for t, v in droute.items() if not v.is_zero()}
        return {
            "ok": not direct and not dr,
            "agree": (not direct) == (not dr),
            "direct": direct,
            "differential": dr,
            "convention": convention,
        }
    elif n == 2:
        for i, j in sorted_tuples(Q.g.rank, 2):
            x, y = Q.gx(i), Q.gx(j)

            def rho_D(a_idx, b_elem):
                a = Q.gx(a_idx)
                return (
                    Q.rho.eval(a, b_elem)
                    + Q.mu.eval([D(a), b_elem])
                    - _apply_map_pt(Q.eta.eval(a, b_elem), D)
                )

            fy = _melem_of_value(f, (j,), Q.h)
            fx = _melem_of_value(f, (i,), Q.h)
            pi_D = (
                Q.pi.value((i, j))
                + Q.eta.eval(x, D(y))
                - permute(Q.eta.eval(y, D(x)), SWAP2)
            )
            r = (
                rho_D(i, fy)
                - permute(rho_D(j, fx), SWAP2)
                - insert_value(f, (), pi_D, ())
            )
            if not r.is_zero():
                direct[(i, j)] = r
        droute = handle.diff(f)
    else:
        raise InputError("cocycle certificates cover n in {1, 2}")
    dr = {t: v for t, v in droute.table.items() if not v.is_zero()}
    return {
        "ok": not direct and not dr,
        "agree": (not direct) == (not dr),
        "direct": direct,
        "differential": dr,
        "convention": convention,
    }


def _melem_of_value(f: Cochain, key, module: FreeModule) -> MElem:
    """Interpret an arity-1 cochain value as a module element."""
    v = f.value(key)
    coords = {}
    for (slots, K, k), c in v.terms.items():
        h = module.alg.mono(K).scale(c)
        coords[k] = coords.get(k, module.alg.zero()) + h
    return MElem(module, coords)


def cocycle_check_type2(Q: QuasiTwilled, T: HModuleMap, f, n: int, convention=CLASSICAL) -> dict:
    """Type II cocycle certificates via zeta/mu^T, direct and differential routes."""
    handle = handle_for(TYPE_II, Q, T, convention=convention, verify=False)
    res = twist2_components(Q, T)
    direct = {}
    if n == 1:
        x = f  # an element of g
        for j in range(Q.h.rank):
            u = Q.hu(j)
            r = zeta_value(Q, T, u, x)
            if not r.is_zero():
                direct[(j,)] = r
        droute = handle.diff0(x)
        dr = {t: v for t, v in droute.items() if not v.is_zero()}
        return {
            "ok": not direct and not dr,
            "agree": (not direct) == (not dr),
            "direct": direct,
            "differential": dr,
            "convention": convention,
        }
    elif n == 2:
        for i, j in sorted_tuples(Q.h.rank, 2):
            u, v = Q.hu(i), Q.hu(j)
            fv = _melem_of_value(f, (j,), Q.g)
            fu = _melem_of_value(f, (i,), Q.g)
            mu_T = res.mu.value((i, j))
            r = (
                zeta_value(Q, T, u, fv)
                - permute(zeta_value(Q, T, v, fu), SWAP2)
                - insert_value(f, (), mu_T, ())
            )
            if not r.is_zero():
                direct[(i, j)] = r
        droute = handle.diff(f)
    else:
        raise InputError("cocycle certificates cover n in {1, 2}")
    dr = {t: v for t, v in droute.table.items() if not v.is_zero()}
    return {
        "ok": not direct and not dr,
        "agree": (not direct) == (not dr),
        "direct": direct,
        "differential": dr,
        "convention": convention,
    }


def zeta_value(Q: QuasiTwilled, T: HModuleMap, u: MElem, x: MElem) -> PTElem:
    """zeta(u (x) x) by direct expansion of the matched-pair reorientation."""
    nat = (
        Q.eta.eval(x, u)
        + Q.pi.eval([x, T(u)])
        - _apply_map_pt(Q.rho.eval(x, u), T)
        - _apply_map_pt(Q.theta.eval([x, T(u)]), T)
    )
    return permute(nat, SWAP2).scale(-1)


def ce_diff_matched_type2(Q: QuasiTwilled, T: HModuleMap, f: Cochain) -> Cochain:
    """The matched-pair d^T, expanded from the Def-4.23 closed forms directly.

    Independent of the twist machinery: mu^T and zeta are rebuilt inline from
    mu, rho, eta, pi and T (theta must vanish), then the classical CE sum is
    expanded without going through the generic handle.
    """
    if not Q.theta.is_zero():
        raise InputError("matched-pair specialization needs theta = 0")
    h, g = Q.h, Q.g
    p = f.arity
    table = {}
    for t in sorted_tuples(h.rank, p + 1):
        acc = PTElem.zero(g, p + 1)
        for i in range(1, p + 2):
            rest = t[: i - 1] + t[i:]
            inner = f.value(rest)
            if inner.is_zero():
                continue
            ui = Q.hu(t[i - 1])

            def zeta_at(k):
                x = g.elem(k)
                nat = (
                    Q.eta.eval(x, ui)
                    + Q.pi.eval([x, T(ui)])
                    - _apply_map_pt(Q.rho.eval(x, ui), T)
                )
                return permute(nat, SWAP2).scale(-1)

            comp = insert_raw(zeta_at, 2, g, 1, inner)
            dest = [0] * (p + 1)
            dest[0] = i - 1
            for s in range(1, p + 1):
                dest[s] = s - 1 if s - 1 < i - 1 else s
            acc = acc + permute(comp, dest).scale((-1) ** (i + 1))
        for i in range(1, p + 1):
            for j in range(i + 1, p + 2):
                ui, uj = Q.hu(t[i - 1]), Q.hu(t[j - 1])
                rest = tuple(t[k] for k in range(p + 1) if k not in (i - 1, j - 1))
                mu_T = (
                    Q.mu.value((t[i - 1], t[j - 1]))
                    + Q.rho.eval(T(ui), uj)
                    - permute(Q.rho.eval(T(uj), ui), SWAP2)
                )
                if mu_T.is_zero():
                    continue
                comp = insert_value(f, (), mu_T, rest)
                dest = [0] * (p + 1)
                dest[0], dest[1] = i - 1, j - 1
                spots = [s for s in range(p + 1) if s not in (i - 1, j - 1)]
                for s, spot in enumerate(spots):
                    dest[2 + s] = spot
                acc = acc + permute(comp, dest).scale((-1) ** (i + j))
        if not acc.is_zero():
            table[t] = acc
    return Cochain(p + 1, h, g, table)


# -- truncated cohomology ----------------------------------------------------------


def _multiindices(dim: int, max_deg: int):
    for total in range(max_deg + 1):
        for cuts in itertools.combinations(range(total + dim - 1), dim - 1):
            mi = []
            prev = -1
            for c in cuts:
                mi.append(c - prev - 1)
                prev = c
            mi.append(total + dim - 2 - prev)
            yield tuple(mi)


def ptelem_coords(module: FreeModule, arity: int, cap: int):
    """All canonical term keys of total PBW degree <= cap."""
    alg = module.alg
    mis = list(_multiindices(alg.dim, cap))
    out = []
    for slots in itertools.product(mis, repeat=arity - 1):
        used = sum(mi_degree(s) for s in slots)
        if used > cap:
            continue
        for K in mis:
            if used + mi_degree(K) > cap:
                continue
            for k in range(module.rank):
                out.append((slots, K, k))
    return out


def cochain_coords(source: FreeModule, target: FreeModule, arity: int, cap: int):
    """Index list [(tuple, key)] of the raw (unconstrained) truncated space."""
    keys = ptelem_coords(target, arity, cap)
    coords = []
    for t in sorted_tuples(source.rank, arity):
        for key in keys:
            coords.append((t, key))
    if len(coords) > COORD_BUDGET:
        raise ResourceError(
            f"truncated space needs {len(coords)} coordinates (budget {COORD_BUDGET})"
        )
    return coords


def _vec_of_cochain(f: Cochain, coords, index) -> list:
    vec = [Fraction(0)] * len(coords)
    for t, v in f.table.items():
        for key, c in v.terms.items():
            pos = index.get((t, key))
            if pos is None:
                raise InputError("cochain exceeds the truncation window")
            vec[pos] = c
    return vec


def skew_basis(source: FreeModule, target: FreeModule, arity: int, cap: int):
    """Basis cochains of the truncated skew subspace.

    Skewness only constrains tuples with repeated entries, through the
    stabilizer transpositions; permuting preserves the total degree so the
    constraints close up within the window.
    """
    coords = cochain_coords(source, target, arity, cap)
    index = {ck: i for i, ck in enumerate(coords)}
    rows = []
    for t in sorted_tuples(source.rank, arity):
        stab = [
            i
            for i in range(arity - 1)
            if t[i] == t[i + 1]
        ]
        for i in stab:
            for key in ptelem_coords(target, arity, cap):
                base = PTElem(target, arity, {key: Fraction(1)})
                moved = permute(base, swap_dest(arity, i, i + 1))
                row = [Fraction(0)] * len(coords)
                row[index[(t, key)]] += 1
                for mkey, c in moved.terms.items():
                    row[index[(t, mkey)]] += c
                if any(row):
                    rows.append(row)
    if rows:
        kernel = linalg.nullspace(rows, ncols=len(coords))
    else:
        kernel = [linalg._unit(len(coords), i) for i in range(len(coords))]
    basis = []
    for vec in kernel:
        table = {}
        for pos, c in enumerate(vec):
            if c:
                t, key = coords[pos]
                table.setdefault(t, {})[key] = c
        basis.append(
            Cochain(
                arity,
                source,
                target,
                {t: PTElem(target, arity, d) for t, d in table.items()},
            )
        )
    return basis, coords, index


def truncated_cohomology(handle: CEComplexHandle, p: int, cap: int, dense_oracle=False) -> dict:
    """(dim Z, dim B, dim H) of the degree-truncated subcomplex at arity p.

    Kernels are exact on the truncated domain; the image is computed within
    the truncation (flagged) since a coboundary may have higher-degree
    preimages outside the window.
    """
    if cap < 0:
        raise InputError("degree cap must be >= 0")
    A = handle.bracket.source
    M = handle.action.hmod
    growth = handle.max_growth()
    basis_p, _, _ = skew_basis(A, M, p, cap)
    coords_up = cochain_coords(A, M, p + 1, cap + growth)
    index_up = {ck: i for i, ck in enumerate(coords_up)}
    rank_fn = linalg.rank_dense if dense_oracle else linalg.rank
    cols = [_vec_of_cochain(handle.diff(f), coords_up, index_up) for f in basis_p]
    rows = [[col[i] for col in cols] for i in range(len(coords_up))]
    rows = [r for r in rows if any(r)]
    r_p = rank_fn(rows) if rows else 0
    dim_z = len(basis_p) - r_p

    # coboundaries: image of d from one arity below, within the window
    if p == 1:
        # the bottom differential has a free coefficient on the argument
        # slot; only its trivial-slot part meets C^1
        ext_keys = ptelem_coords(M, 2, cap + growth)
        ext_coords = [((i,), key) for i in range(A.rank) for key in ext_keys]
        ext_index = {ck: n for n, ck in enumerate(ext_coords)}
        zero_mi = M.alg.zero_index
        prev_cols = []
        for k in range(M.rank):
            for K in _multiindices(M.alg.dim, cap):
                u = M.elem(k, M.alg.mono(K))
                vec = [Fraction(0)] * len(ext_coords)
                for t, v in handle.diff0(u).items():
                    for key, c in v.terms.items():
                        pos = ext_index.get((t, key))
                        if pos is None:
                            raise InputError("bottom differential exceeds the window")
                        vec[pos] = c
                prev_cols.append(vec)
        inside = [
            n
            for n, ((_i,), (slots, K, _k)) in enumerate(ext_coords)
            if slots == (zero_mi,) and mi_degree(K) <= cap
        ]
    else:
        coords_here = cochain_coords(A, M, p, cap + growth)
        index_here = {ck: i for i, ck in enumerate(coords_here)}
        inside = [
            i
            for i, (t, (slots, K, k)) in enumerate(coords_here)
            if sum(mi_degree(s) for s in slots) + mi_degree(K) <= cap
        ]
        basis_prev, _, _ = skew_basis(A, M, p - 1, cap)
        prev_cols = [
            _vec_of_cochain(handle.diff(f), coords_here, index_here)
            for f in basis_prev
        ]
    dim_b = linalg.image_dim_within(prev_cols, inside) if prev_cols else 0
    return {
        "arity": p,
        "cap": cap,
        "dim_cochains": len(basis_p),
        "dim_Z": dim_z,
        "dim_B": dim_b,
        "dim_H": dim_z - dim_b,
        "caveat": "image computed within truncation",
        "convention": handle.convention,
    }
