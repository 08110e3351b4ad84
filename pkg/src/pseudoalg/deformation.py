"""Deformation maps of both types, twisting, and the controlling operators.

Type I maps D: g -> h deform along the graph construction; type II maps
T: h -> g solve a quadratic-cubic identity.  Each residual is computed three
independent ways and the routes are asserted against each other:

  * the defining identity, expanded componentwise;
  * the twisted bracket e^{[., M]_NR} Omega (series, with termination bound);
  * the conjugated bracket e^{-M} o Omega o (e^M (x) e^M).

The controlling operators come from the derived-bracket construction: lift,
bracket against the relevant components of Omega, project back to the block.
Projection here is exact extraction plus a purity assertion; the bidegree
bookkeeping guarantees nothing is discarded.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .hopf import HElem, InputError, InternalInvariantError
from .ptensor import FreeModule, MElem, PTElem, permute, swap_dest
from .cochains import (
    Cochain,
    MixedMap,
    assert_block_shape,
    extract_components,
    extract_mixed,
    extract_pure,
    lift_block,
    lift_mixed,
    nr_bracket,
    sorted_tuples,
)
from .structures import QuasiTwilled

SWAP2 = (1, 0)  # transposition of the two slots of an arity-2 value

TYPE_I = "I"
TYPE_II = "II"

# Normalization dictionary, frozen by the equivalence suite.  The defining
# residuals are oriented so that they coincide exactly with the Maurer-Cartan
# residuals of the controlling operators: type I as (h-side) - D(g-side)
# (which is also the twisted theta component), type II as (g-side) - T(h-side)
# (the twisted xi component).
MC1_VS_DEFINING = Fraction(1)
MC2_VS_DEFINING = Fraction(1)
XI_VS_DEFINING = Fraction(1)


class HModuleMap:
    """Left H-module map between free modules, stored as an H-valued matrix."""

    def __init__(self, src: FreeModule, dst: FreeModule, rows: dict):
        self.src = src
        self.dst = dst
        self.rows = {}
        for i, m in rows.items():
            if not 0 <= i < src.rank:
                raise InputError("row index out of range")
            if m.module != dst:
                raise InputError("row lives in the wrong module")
            if not m.is_zero():
                self.rows[i] = m

    @classmethod
    def zero(cls, src, dst):
        return cls(src, dst, {})

    @classmethod
    def scalar(cls, src, dst, c, index_map=None):
        """c * (basis relabelling); with index_map None, e_i -> c e_i."""
        rows = {}
        for i in range(src.rank):
            j = index_map(i) if index_map else i
            rows[i] = dst.elem(j).scale(c)
        return cls(src, dst, rows)

    def __call__(self, m: MElem) -> MElem:
        if m.module != self.src:
            raise InputError("map applied to element of the wrong module")
        acc = self.dst.zero_elem()
        for i, h in m.coords.items():
            row = self.rows.get(i)
            if row is not None:
                acc = acc + row.act(h)
        return acc

    def apply_basis(self, i: int) -> MElem:
        return self.rows.get(i, self.dst.zero_elem())

    def __add__(self, other: "HModuleMap") -> "HModuleMap":
        if (self.src, self.dst) != (other.src, other.dst):
            raise InputError("map shape mismatch")
        rows = dict(self.rows)
        for i, m in other.rows.items():
            cur = rows.get(i)
            rows[i] = m if cur is None else cur + m
        return HModuleMap(self.src, self.dst, rows)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "HModuleMap":
        return HModuleMap(self.src, self.dst, {i: m.scale(c) for i, m in self.rows.items()})

    def is_zero(self):
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, HModuleMap):
            return NotImplemented
        if (self.src, self.dst) != (other.src, other.dst):
            return False
        keys = set(self.rows) | set(other.rows)
        return all(self.apply_basis(i) == other.apply_basis(i) for i in keys)

    def as_cochain(self) -> Cochain:
        """The map as an arity-1 block cochain."""
        table = {}
        for i, m in self.rows.items():
            terms = {}
            for k, h in m.coords.items():
                for K, c in h.terms.items():
                    terms[((), K, k)] = terms.get(((), K, k), Fraction(0)) + c
            table[(i,)] = PTElem(self.dst, 1, terms)
        return Cochain(1, self.src, self.dst, table)

    def __repr__(self):
        return f"HModuleMap({self.src.name}->{self.dst.name})"


def map_value(v: PTElem, fn) -> PTElem:
    """map_module that tolerates an all-zero image."""
    out_terms = {}
    alg = v.module.alg
    target = None
    for (slots, K, k), c in v.terms.items():
        img = fn(k)
        target = img.module
        for k2, h in img.coords.items():
            for K2, c2 in (alg.mono(K) * h).terms.items():
                key = (slots, K2, k2)
                s = out_terms.get(key, Fraction(0)) + c * c2
                if s:
                    out_terms[key] = s
                else:
                    out_terms.pop(key, None)
    if target is None:
        raise InputError("map_value: cannot infer target of the zero map")
    return PTElem(target, v.arity, out_terms)


def _apply_map_pt(v: PTElem, M: HModuleMap) -> PTElem:
    return map_value(v, lambda k: M.apply_basis(k)) if not v.is_zero() else PTElem.zero(
        M.dst, v.arity
    )


# -- defining residuals ---------------------------------------------------------


def dmap1_residual(Q: QuasiTwilled, D: HModuleMap) -> Cochain:
    """Defining residual of a type I map: (h-side) - D(g-side), per basis pair."""
    if (D.src, D.dst) != (Q.g, Q.h):
        raise InputError("type I maps go g -> h")
    table = {}
    for i, j in sorted_tuples(Q.g.rank, 2):
        x, y = Q.gx(i), Q.gx(j)
        Dx, Dy = D(x), D(y)
        gside = (
            Q.pi.value((i, j))
            + Q.eta.eval(x, Dy)
            - permute(Q.eta.eval(y, Dx), SWAP2)
        )
        hside = (
            Q.mu.eval([Dx, Dy])
            + Q.rho.eval(x, Dy)
            - permute(Q.rho.eval(y, Dx), SWAP2)
            + Q.theta.value((i, j))
        )
        table[(i, j)] = hside - _apply_map_pt(gside, D)
    return Cochain(2, Q.g, Q.h, table)


def dmap2_residual(Q: QuasiTwilled, T: HModuleMap) -> Cochain:
    """Defining residual of a type II map: (g-side) - T(h-side), per basis pair."""
    if (T.src, T.dst) != (Q.h, Q.g):
        raise InputError("type II maps go h -> g")
    table = {}
    for i, j in sorted_tuples(Q.h.rank, 2):
        u, v = Q.hu(i), Q.hu(j)
        Tu, Tv = T(u), T(v)
        gside = (
            Q.pi.eval([Tu, Tv])
            + Q.eta.eval(Tu, v)
            - permute(Q.eta.eval(Tv, u), SWAP2)
        )
        hside = (
            Q.rho.eval(Tu, v)
            - permute(Q.rho.eval(Tv, u), SWAP2)
            + Q.mu.value((i, j))
            + Q.theta.eval([Tu, Tv])
        )
        table[(i, j)] = gside - _apply_map_pt(hside, T)
    return Cochain(2, Q.h, Q.g, table)


def is_dmap1(Q, D) -> bool:
    return dmap1_residual(Q, D).is_zero()


def is_dmap2(Q, T) -> bool:
    return dmap2_residual(Q, T).is_zero()


def graph_check(Q: QuasiTwilled, D: HModuleMap) -> dict:
    """Closure of Gr(D) under Omega, via the kernel map (x,u) -> D(x) - u.

    Independent of dmap1_residual: evaluates the assembled bracket on graph
    elements and tests membership in H^2 (x)_H Gr(D) by exactness of
    tensoring the defining short exact sequence with the flat module H^2.
    """
    if (D.src, D.dst) != (Q.g, Q.h):
        raise InputError("type I maps go g -> h")
    om = Q.omega()
    G, cut = Q.G, Q.G.split

    def phi(k: int) -> MElem:
        # Phi(x, u) = u - D(x), valued in h; Gr(D) = ker Phi and H^2 is
        # flat, so membership is exactly the vanishing of the pushforward.
        if k < cut:
            return -D.apply_basis(k)
        return Q.h.elem(k - cut)

    residuals = {}
    for i, j in sorted_tuples(Q.g.rank, 2):
        # graph elements (x_i, D x_i) in G
        gi = G.elem(i) + _embed_h(Q, D.apply_basis(i))
        gj = G.elem(j) + _embed_h(Q, D.apply_basis(j))
        val = om.eval([gi, gj])
        resid = map_value(val, phi) if not val.is_zero() else PTElem.zero(Q.h, 2)
        if not resid.is_zero():
            residuals[(i, j)] = resid
    return {"ok": not residuals, "residuals": residuals}


def _embed_h(Q: QuasiTwilled, m: MElem) -> MElem:
    cut = Q.G.split
    return MElem(Q.G, {k + cut: h for k, h in m.coords.items()})


def _embed_g(Q: QuasiTwilled, m: MElem) -> MElem:
    return MElem(Q.G, dict(m.coords))


def _endo_of(Q: QuasiTwilled, M: HModuleMap, kind: str) -> dict:
    """The square-zero module endomorphism of G induced by M."""
    cut = Q.G.split
    out = {}
    if kind == TYPE_I:
        for i in range(Q.g.rank):
            out[i] = _embed_h(Q, M.apply_basis(i))
    else:
        for j in range(Q.h.rank):
            out[cut + j] = _embed_g(Q, M.apply_basis(j))
    return out


def _lift_map(Q: QuasiTwilled, M: HModuleMap, kind: str) -> Cochain:
    """The map as an arity-1 cochain on G (bidegree 1|-1 or -1|1)."""
    endo = _endo_of(Q, M, kind)
    table = {}
    for i, m in endo.items():
        terms = {}
        for k, h in m.coords.items():
            for K, c in h.terms.items():
                terms[((), K, k)] = terms.get(((), K, k), Fraction(0)) + c
        v = PTElem(Q.G, 1, terms)
        if not v.is_zero():
            table[(i,)] = v
    return Cochain(1, Q.G, Q.G, table)


def exp_twist(Q: QuasiTwilled, M: HModuleMap, kind: str) -> Cochain:
    """e^{[., M]_NR} Omega, summed until the next term vanishes (bound 4 terms).

    The bidegree shift of ad_M makes the series nilpotent on arity-2 cochains;
    a nonzero fifth term would violate that invariant and aborts.
    """
    mhat = _lift_map(Q, M, kind)
    acc = Q.omega()
    term = acc
    k = 0
    factorial = 1
    while True:
        term = nr_bracket(term, mhat)
        k += 1
        factorial *= k
        if term.is_zero():
            break
        if k >= 4:
            raise InternalInvariantError("twist series failed to terminate in 4 terms")
        acc = acc + term.scale(Fraction(1, factorial))
    return acc


def conjugate_twist(Q: QuasiTwilled, M: HModuleMap, kind: str) -> Cochain:
    """e^{-M} o Omega o (e^M (x) e^M), computed on basis pairs of G."""
    om = Q.omega()
    G = Q.G
    endo = _endo_of(Q, M, kind)

    def exp_plus(k: int) -> MElem:
        img = endo.get(k)
        return G.elem(k) if img is None else G.elem(k) + img

    def exp_minus(k: int) -> MElem:
        img = endo.get(k)
        return G.elem(k) if img is None else G.elem(k) - img

    table = {}
    for t in sorted_tuples(G.rank, 2):
        val = om.eval([exp_plus(t[0]), exp_plus(t[1])])
        if val.is_zero():
            continue
        v = map_value(val, exp_minus)
        if not v.is_zero():
            table[t] = v
    return Cochain(2, G, G, table)


def twist1_components(Q: QuasiTwilled, D: HModuleMap) -> QuasiTwilled:
    """Closed-form components of the type I twist (five substructures).

    Always quasi-twilled: mu and eta are untouched; D is a deformation map
    iff the twisted theta vanishes.
    """
    if (D.src, D.dst) != (Q.g, Q.h):
        raise InputError("type I maps go g -> h")
    g, h = Q.g, Q.h
    pi_t, theta_t = {}, {}
    for i, j in sorted_tuples(g.rank, 2):
        x, y = Q.gx(i), Q.gx(j)
        Dx, Dy = D(x), D(y)
        eta_xDy = Q.eta.eval(x, Dy)
        eta_yDx = Q.eta.eval(y, Dx)
        pi_t[(i, j)] = Q.pi.value((i, j)) + eta_xDy - permute(eta_yDx, SWAP2)
        theta_t[(i, j)] = (
            Q.theta.value((i, j))
            + Q.rho.eval(x, Dy)
            - permute(Q.rho.eval(y, Dx), SWAP2)
            - _apply_map_pt(Q.pi.value((i, j)), D)
            + Q.mu.eval([Dx, Dy])
            - _apply_map_pt(eta_xDy, D)
            + permute(_apply_map_pt(eta_yDx, D), SWAP2)
        )
    rho_t = {}
    for i in range(g.rank):
        for j in range(h.rank):
            x, v = Q.gx(i), Q.hu(j)
            rho_t[(i, j)] = (
                Q.rho.value(i, j)
                + Q.mu.eval([D(x), v])
                - _apply_map_pt(Q.eta.value(i, j), D)
            )
    return QuasiTwilled(
        g,
        h,
        pi=Cochain(2, g, g, pi_t),
        rho=MixedMap(g, h, h, rho_t),
        mu=Q.mu,
        eta=Q.eta,
        theta=Cochain(2, g, h, theta_t),
        G=Q.G,
    )


def twist1(Q: QuasiTwilled, D: HModuleMap) -> tuple:
    """Type I twist with the closed form cross-checked against both the
    bracket series and the conjugated bracket."""
    out = twist1_components(Q, D)
    series = exp_twist(Q, D, TYPE_I)
    conj = conjugate_twist(Q, D, TYPE_I)
    report = {
        "closed_form_equals_series": out.omega() == series,
        "series_equals_conjugation": series == conj,
        "is_dmap": out.theta.is_zero(),
    }
    return out, report


class Twist2Result:
    """Six components of the type II twist; xi obstructs quasi-twilledness."""

    def __init__(self, Q, pi, rho, mu, eta, theta, xi):
        self.Q = Q
        self.pi, self.rho, self.mu, self.eta, self.theta, self.xi = (
            pi,
            rho,
            mu,
            eta,
            theta,
            xi,
        )

    def omega(self) -> Cochain:
        G = self.Q.G
        return (
            lift_block(self.pi, G)
            + lift_mixed(self.rho, G)
            + lift_block(self.mu, G)
            + lift_mixed(self.eta, G)
            + lift_block(self.theta, G)
            + lift_block(self.xi, G)
        )

    def as_quasi_twilled(self) -> QuasiTwilled:
        if not self.xi.is_zero():
            raise InputError("twisted structure is not quasi-twilled: xi != 0")
        return QuasiTwilled(
            self.Q.g,
            self.Q.h,
            pi=self.pi,
            rho=self.rho,
            mu=self.mu,
            eta=self.eta,
            theta=self.theta,
            G=self.Q.G,
        )


def twist2_components(Q: QuasiTwilled, T: HModuleMap) -> Twist2Result:
    """Closed-form components of the type II twist (six substructures)."""
    if (T.src, T.dst) != (Q.h, Q.g):
        raise InputError("type II maps go h -> g")
    g, h = Q.g, Q.h
    pi_t, theta_t = {}, {}
    for i, j in sorted_tuples(g.rank, 2):
        pi_t[(i, j)] = Q.pi.value((i, j)) - _apply_map_pt(Q.theta.value((i, j)), T)
        theta_t[(i, j)] = Q.theta.value((i, j))
    rho_t, eta_t = {}, {}
    for i in range(g.rank):
        for j in range(h.rank):
            x, v = Q.gx(i), Q.hu(j)
            Tv = T(v)
            rho_t[(i, j)] = Q.rho.value(i, j) + Q.theta.eval([x, Tv])
            eta_t[(i, j)] = (
                Q.eta.value(i, j)
                + Q.pi.eval([x, Tv])
                - _apply_map_pt(Q.rho.value(i, j), T)
                - _apply_map_pt(Q.theta.eval([x, Tv]), T)
            )
    mu_t = {}
    for i, j in sorted_tuples(h.rank, 2):
        u, v = Q.hu(i), Q.hu(j)
        Tu, Tv = T(u), T(v)
        mu_t[(i, j)] = (
            Q.mu.value((i, j))
            + Q.rho.eval(Tu, v)
            - permute(Q.rho.eval(Tv, u), SWAP2)
            + Q.theta.eval([Tu, Tv])
        )
    xi = dmap2_residual(Q, T).scale(XI_VS_DEFINING)
    return Twist2Result(
        Q,
        pi=Cochain(2, g, g, pi_t),
        rho=MixedMap(g, h, h, rho_t),
        mu=Cochain(2, h, h, mu_t),
        eta=MixedMap(g, h, g, eta_t),
        theta=Cochain(2, g, h, theta_t),
        xi=xi,
    )


def twist2(Q: QuasiTwilled, T: HModuleMap) -> tuple:
    """Type II twist with the closed form cross-checked against both routes."""
    result = twist2_components(Q, T)
    series = exp_twist(Q, T, TYPE_II)
    conj = conjugate_twist(Q, T, TYPE_II)
    report = {
        "closed_form_equals_series": result.omega() == series,
        "series_equals_conjugation": series == conj,
        "is_dmap": result.xi.is_zero(),
    }
    return result, report


# -- derived controlling operators ----------------------------------------------


class LinfOps:
    """Curved operators controlling one deformation-map type.

    Type I on C^*(g, h): l0 = theta, l1 = [pi+rho, .], l2 = [[mu+eta, .], .].
    Type II on C^*(h, g): l1 = [mu+eta, .], l2 = [[pi+rho, .], .],
    l3 = [[[theta, .], .], .].  Arguments and values are block cochains; the
    lift/extract round trip asserts nothing leaks outside the block.
    """

    def __init__(self, Q: QuasiTwilled, kind: str):
        self.Q = Q
        self.kind = kind
        G = Q.G
        self._pr = lift_block(Q.pi, G) + lift_mixed(Q.rho, G)
        self._me = lift_block(Q.mu, G) + lift_mixed(Q.eta, G)
        self._th = lift_block(Q.theta, G)
        if kind == TYPE_I:
            self.src, self.tgt = Q.g, Q.h
        elif kind == TYPE_II:
            self.src, self.tgt = Q.h, Q.g
        else:
            raise InputError("kind must be 'I' or 'II'")

    def _pattern(self, arity):
        part = "g" if self.kind == TYPE_I else "h"
        tpart = "h" if self.kind == TYPE_I else "g"
        return tuple([part] * arity), tpart

    def _check_block(self, f: Cochain):
        if (f.source, f.target) != (self.src, self.tgt):
            raise InputError("argument cochain has the wrong block signature")

    def _lift(self, f: Cochain) -> Cochain:
        return lift_block(f, self.Q.G)

    def _extract(self, F: Cochain, arity: int) -> Cochain:
        pattern, tpart = self._pattern(arity)
        assert_block_shape(F, pattern, tpart)
        part = "g" if self.kind == TYPE_I else "h"
        return extract_pure(F, part, tpart)

    def l0(self) -> Cochain:
        if self.kind == TYPE_I:
            return self.Q.theta
        return Cochain.zero(2, self.src, self.tgt)

    def l1(self, f: Cochain) -> Cochain:
        self._check_block(f)
        op = self._pr if self.kind == TYPE_I else self._me
        return self._extract(nr_bracket(op, self._lift(f)), f.arity + 1)

    def l2(self, f: Cochain, g: Cochain) -> Cochain:
        self._check_block(f)
        self._check_block(g)
        op = self._me if self.kind == TYPE_I else self._pr
        inner = nr_bracket(op, self._lift(f))
        return self._extract(nr_bracket(inner, self._lift(g)), f.arity + g.arity)

    def l3(self, f: Cochain, g: Cochain, h: Cochain) -> Cochain:
        for c in (f, g, h):
            self._check_block(c)
        if self.kind == TYPE_I:
            return Cochain.zero(f.arity + g.arity + h.arity - 1, self.src, self.tgt)
        inner = nr_bracket(nr_bracket(self._th, self._lift(f)), self._lift(g))
        return self._extract(
            nr_bracket(inner, self._lift(h)), f.arity + g.arity + h.arity - 1
        )

    def bracket(self, k: int, args) -> Cochain:
        if k == 0:
            return self.l0()
        if k == 1:
            return self.l1(*args)
        if k == 2:
            return self.l2(*args)
        if k == 3:
            return self.l3(*args)
        # l_{k >= 4} vanish for both types; derived arity is 2 + sum - k
        n = 2 + sum(f.arity for f in args) - k
        return Cochain.zero(n, self.src, self.tgt)


def curved_l_type1(Q: QuasiTwilled) -> LinfOps:
    return LinfOps(Q, TYPE_I)


def curved_l_type2(Q: QuasiTwilled) -> LinfOps:
    return LinfOps(Q, TYPE_II)


def mc_residual_type1(Q: QuasiTwilled, D: HModuleMap) -> Cochain:
    """l0 + l1(D) + 1/2 l2(D, D); equals -(defining residual), asserted in tests."""
    ops = curved_l_type1(Q)
    Dc = D.as_cochain()
    return ops.l0() + ops.l1(Dc) + ops.l2(Dc, Dc).scale(Fraction(1, 2))


def mc_residual_type2(Q: QuasiTwilled, T: HModuleMap) -> Cochain:
    """l1(T) + 1/2 l2(T,T) + 1/6 l3(T,T,T); equals -(defining residual)."""
    ops = curved_l_type2(Q)
    Tc = T.as_cochain()
    return (
        ops.l1(Tc)
        + ops.l2(Tc, Tc).scale(Fraction(1, 2))
        + ops.l3(Tc, Tc, Tc).scale(Fraction(1, 6))
    )


def mc_residual_strict(Q: QuasiTwilled, M: HModuleMap, kind: str) -> list:
    """Per-arity residuals l_k(x,...,x); the definition-style MC variant.

    The theorems use the summed residual; this strict mode reports each
    l_k separately for k = 0..3.
    """
    ops = LinfOps(Q, kind)
    Mc = M.as_cochain()
    out = [ops.l0()] if kind == TYPE_I else []
    out.append(ops.l1(Mc))
    out.append(ops.l2(Mc, Mc))
    if kind == TYPE_II:
        out.append(ops.l3(Mc, Mc, Mc))
    return out


class TwistedLinfOps:
    """Operators twisted by a valid deformation map (Theorems on D + D')."""

    def __init__(self, Q: QuasiTwilled, M: HModuleMap, kind: str):
        resid = dmap1_residual(Q, M) if kind == TYPE_I else dmap2_residual(Q, M)
        if not resid.is_zero():
            raise InputError("twisting requires a valid deformation map")
        self.base = LinfOps(Q, kind)
        self.kind = kind
        self.Mc = M.as_cochain()

    def l1(self, f: Cochain) -> Cochain:
        out = self.base.l1(f) + self.base.l2(self.Mc, f)
        if self.kind == TYPE_II:
            out = out + self.base.l3(self.Mc, self.Mc, f).scale(Fraction(1, 2))
        return out

    def l2(self, f: Cochain, g: Cochain) -> Cochain:
        out = self.base.l2(f, g)
        if self.kind == TYPE_II:
            out = out + self.base.l3(self.Mc, f, g)
        return out

    def l3(self, f, g, h) -> Cochain:
        return self.base.l3(f, g, h)

    def mc_residual(self, M2: HModuleMap) -> Cochain:
        """Twisted MC residual of a perturbation; zero iff M + M' deforms."""
        c = M2.as_cochain()
        out = self.l1(c) + self.l2(c, c).scale(Fraction(1, 2))
        if self.kind == TYPE_II:
            out = out + self.l3(c, c, c).scale(Fraction(1, 6))
        return out


def twisted_l_type1(Q, D) -> TwistedLinfOps:
    return TwistedLinfOps(Q, D, TYPE_I)


def twisted_l_type2(Q, T) -> TwistedLinfOps:
    return TwistedLinfOps(Q, T, TYPE_II)


# -- higher Jacobi identities ----------------------------------------------------


def _koszul_sign(order, degrees) -> int:
    """Koszul sign for rearranging graded objects into the given order."""
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and degrees[order[a]] % 2 and degrees[order[b]] % 2:
                sign = -sign
    return sign


def _shuffle_indices(n, i):
    for first in itertools.combinations(range(n), i):
        rest = tuple(k for k in range(n) if k not in first)
        yield first + rest


def linf_identity_residual(ops, n: int, args) -> Cochain:
    """Residual of the n-th curved higher-Jacobi identity on given arguments.

    sum_{i=0..n} sum_{(i, n-i)-shuffles} eps(sigma)
        l_{n-i+1}(l_i(x_{sigma(1..i)}), x_{sigma(i+1..n)});
    graded symmetric convention, Koszul signs from degrees arity-1.
    """
    if len(args) != n:
        raise InputError("argument count must equal the identity arity")
    degrees = [f.arity - 1 for f in args]
    acc = None
    for i in range(0, n + 1):
        for order in _shuffle_indices(n, i):
            head = [args[k] for k in order[:i]]
            tail = [args[k] for k in order[i:]]
            inner = ops.bracket(i, head)
            term = ops.bracket(1 + len(tail), [inner] + tail)
            sign = _koszul_sign(order, degrees)
            term = term.scale(sign)
            acc = term if acc is None else acc + term
    return acc


def linf_jacobi_check(ops, max_arity: int, rng, samples: int = 2) -> dict:
    """Higher-Jacobi identities for n = 1..max_arity on seeded random cochains.

    Curvature identities included: n=1 is l1(l1 x) + l2(l0, x) = 0 for curved
    type I.  Returns per-n verdicts with any nonzero residual kept.
    """
    from .cochains import random_cochain

    if max_arity > 4:
        raise InputError("max_arity is capped at 4")
    out = {"ok": True, "identities": {}}
    # n = 0 identity: l1(l0) = 0
    l0 = ops.l0()
    if not l0.is_zero():
        r0 = ops.l1(l0)
        out["identities"][0] = r0.is_zero()
        out["ok"] &= r0.is_zero()
    for n in range(1, max_arity + 1):
        good = True
        for s in range(samples):
            args = []
            for _ in range(n):
                ar = rng.choice([1, 2]) if n <= 3 else 1
                args.append(random_cochain(rng, ops.src, ops.tgt, ar, max_deg=1))
            resid = linf_identity_residual(ops, n, args)
            if not resid.is_zero():
                good = False
                out.setdefault("failures", []).append((n, s))
        out["identities"][n] = good
        out["ok"] &= good
    return out
