"""Skew-symmetric conformal polylinear maps and their insertion calculus.

A Cochain stores its values only on non-decreasing basis tuples; values on all
other argument orders are derived through the signed symmetric-group action

    f(x_1, ..., x_p) = sign(s) (s (x)_H id) f(x_{s(1)}, ..., x_{s(p)}),

realized concretely by placement arrays (see ptensor.permute).  Composition
inserts an inner value into one argument slot of an outer map: the inner
H-coefficients multiply the iterated-coproduct spread of the outer slot
coefficient.  That insertion rule is forced by H-polylinearity and is the
single composition primitive behind the circle product, the NR bracket, the
Jacobiator and the Chevalley-Eilenberg sums.

Throughout, composite values are slot-ALIGNED: after every insertion the slots
are rearranged so that slot i carries the coefficient of argument x_i.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .hopf import HElem, HTensor, InputError, ONE, ZERO, mi_splits
from .ptensor import (
    FreeModule,
    MElem,
    PTElem,
    canonicalize,
    perm_sign,
    permute,
    swap_dest,
)


def sorted_tuples(rank: int, p: int):
    return itertools.combinations_with_replacement(range(rank), p)


class Cochain:
    """Skew-symmetric conformal p-linear map source^{(x)p} -> H^{(x)p} (x)_H target."""

    __slots__ = ("arity", "source", "target", "table", "_value_cache")

    def __init__(self, arity: int, source: FreeModule, target: FreeModule, table: dict):
        if arity < 1:
            raise InputError("cochain arity must be >= 1")
        self.arity = arity
        self.source = source
        self.target = target
        self.table = {}
        for t, v in table.items():
            t = tuple(t)
            if list(t) != sorted(t):
                raise InputError(f"table key {t} is not non-decreasing")
            if v.arity != arity or v.module != target:
                raise InputError("table value has wrong arity or module")
            if not v.is_zero():
                self.table[t] = v
        self._value_cache = {}

    @classmethod
    def zero(cls, arity, source, target) -> "Cochain":
        return cls(arity, source, target, {})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.table.values())

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if (self.arity, self.source, self.target) != (
            other.arity,
            other.source,
            other.target,
        ):
            return False
        keys = set(self.table) | set(other.table)
        zero = PTElem.zero(self.target, self.arity)
        return all(
            self.table.get(t, zero) == other.table.get(t, zero) for t in keys
        )

    def __add__(self, other: "Cochain") -> "Cochain":
        if (self.arity, self.source, self.target) != (
            other.arity,
            other.source,
            other.target,
        ):
            raise InputError("cochain shape mismatch")
        out = dict(self.table)
        for t, v in other.table.items():
            cur = out.get(t)
            out[t] = v if cur is None else cur + v
        return Cochain(self.arity, self.source, self.target, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "Cochain":
        c = Fraction(c)
        return Cochain(
            self.arity,
            self.source,
            self.target,
            {t: v.scale(c) for t, v in self.table.items()},
        )

    # -- evaluation ------------------------------------------------------------

    def value(self, args: tuple) -> PTElem:
        """Value on an arbitrary basis-index tuple via the signed slot action."""
        args = tuple(args)
        cached = self._value_cache.get(args)
        if cached is not None:
            return cached
        order = tuple(sorted(range(self.arity), key=lambda i: args[i]))
        key = tuple(args[i] for i in order)
        stored = self.table.get(key)
        if stored is None:
            out = PTElem.zero(self.target, self.arity)
        elif order == tuple(range(self.arity)):
            out = stored
        else:
            sign = perm_sign(order)
            out = permute(stored, order)
            if sign < 0:
                out = out.scale(-1)
        self._value_cache[args] = out
        return out

    def eval(self, args) -> PTElem:
        """H-polylinear extension to module elements."""
        args = list(args)
        if len(args) != self.arity:
            raise InputError("eval: wrong number of arguments")
        for a in args:
            if a.module != self.source:
                raise InputError("eval: argument in wrong module")
        acc = PTElem.zero(self.target, self.arity)
        for combo in itertools.product(*(sorted(a.coords.items()) for a in args)):
            keys = tuple(k for k, _h in combo)
            base = self.value(keys)
            if base.is_zero():
                continue
            coeff = HTensor.from_legs([h for _k, h in combo])
            from .ptensor import act

            acc = acc + act(coeff, base)
        return acc

    def max_degree(self) -> int:
        return max((v.degree() for v in self.table.values()), default=-1)

    def __repr__(self):
        return (
            f"Cochain(arity={self.arity}, {self.source.name}->{self.target.name}, "
            f"{len(self.table)} entries)"
        )


def skew_check(f: Cochain):
    """Per-tuple, per-transposition residuals of the skew-symmetry identity.

    Returns a list of (tuple, (i, j), residual PTElem); empty iff skew.
    """
    failures = []
    p = f.arity
    for t in sorted(f.table):
        for i in range(p - 1):
            swapped = list(t)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            # eq: f(t) = -P_(i,i+1) f(t with i,i+1 swapped)
            derived = permute(f.value(tuple(swapped)), swap_dest(p, i, i + 1)).scale(-1)
            resid = f.value(t) - derived
            if not resid.is_zero():
                failures.append((t, (i, i + 1), resid))
    return failures


def skew_symmetrize(arity, source, target, raw_value_fn) -> Cochain:
    """Total skew-symmetrization of an arbitrary tuple-indexed raw value map."""
    table = {}
    for t in sorted_tuples(source.rank, arity):
        acc = PTElem.zero(target, arity)
        for sigma in itertools.permutations(range(arity)):
            w = raw_value_fn(tuple(t[sigma[i]] for i in range(arity)))
            if w.is_zero():
                continue
            term = permute(w, sigma)
            if perm_sign(sigma) < 0:
                term = term.scale(-1)
            acc = acc + term
        table[t] = acc
    return Cochain(arity, source, target, table)


# -- composition -------------------------------------------------------------


def insert_raw(value_at, outer_arity: int, target: FreeModule, pos: int, inner: PTElem) -> PTElem:
    """Insert an inner value into argument `pos` (0-based) of an outer map.

    value_at(k) must return the outer value (a canonical PTElem of arity
    outer_arity over target) with basis element k in position pos and the
    remaining arguments already fixed.  The inner H-coefficients multiply the
    iterated-coproduct spread of the outer slot coefficient; the inner block
    occupies positions pos .. pos+q-1 of the result.
    """
    p = outer_arity
    q = inner.arity
    alg = target.alg
    zero_mi = alg.zero_index
    raw = []
    for (c_slots, K_in, k_in), c_inner in inner.terms.items():
        c_exp = c_slots + (zero_mi,)
        base = value_at(k_in)
        if base.is_zero():
            continue
        for (p_slots, K_out, m), c_outer in base.terms.items():
            p_exp = p_slots + (zero_mi,)
            scale0 = c_inner * c_outer
            for X, cX in alg.mul_mono(K_in, p_exp[pos]).items():
                for split in mi_splits(X, q):
                    # legs: inner coefficients times the coproduct spread
                    partial = [((), ONE)]
                    for ci, ji in zip(c_exp, split):
                        nxt = []
                        for prefix, cp in partial:
                            for L, cl in alg.mul_mono(ci, ji).items():
                                nxt.append((prefix + (L,), cp * cl))
                        partial = nxt
                    for legs, cl in partial:
                        new_slots = p_exp[:pos] + legs + p_exp[pos + 1 :]
                        raw.append((new_slots, K_out, m, scale0 * cX * cl))
    return canonicalize(target, p + q - 1, raw)


def insert_value(outer: Cochain, pre: tuple, inner: PTElem, post: tuple) -> PTElem:
    """outer(pre..., inner, post...) for a cochain; see insert_raw."""
    if len(pre) + 1 + len(post) != outer.arity:
        raise InputError("insert_value: argument count mismatch")
    if inner.module != outer.source:
        raise InputError("insert_value: inner value lives in the wrong module")
    return insert_raw(
        lambda k: outer.value(pre + (k,) + post),
        outer.arity,
        outer.target,
        len(pre),
        inner,
    )


def _shuffles(q: int, r: int):
    """(q, r)-shuffles of {0..q+r-1} as placement images sigma(0..q+r-1)."""
    n = q + r
    for first in itertools.combinations(range(n), q):
        rest = tuple(i for i in range(n) if i not in first)
        yield first + rest


def circle(f: Cochain, g: Cochain) -> Cochain:
    """Circle (insertion) product: sum over (q, p-1)-shuffles of f(g(...), ...)."""
    if f.source != f.target or g.source != g.target or f.source != g.source:
        raise InputError("circle product needs cochains on one common module")
    p, q = f.arity, g.arity
    n = p + q - 1
    mod = f.source
    table = {}
    for t in sorted_tuples(mod.rank, n):
        acc = PTElem.zero(mod, n)
        for sigma in _shuffles(q, p - 1):
            inner_args = tuple(t[sigma[i]] for i in range(q))
            inner = g.value(inner_args)
            if inner.is_zero():
                continue
            outer_args = tuple(t[sigma[i]] for i in range(q, n))
            composite = insert_value(f, (), inner, outer_args)
            if composite.is_zero():
                continue
            # align slots: composite slot i carries argument t[sigma[i]]
            term = permute(composite, sigma)
            if perm_sign(sigma) < 0:
                term = term.scale(-1)
            acc = acc + term
        if not acc.is_zero():
            table[t] = acc
    return Cochain(n, mod, mod, table)


def nr_bracket(f: Cochain, g: Cochain) -> Cochain:
    """Nijenhuis-Richardson bracket [f, g] = f o g - (-1)^{(p-1)(q-1)} g o f."""
    sign = -1 if ((f.arity - 1) * (g.arity - 1)) % 2 else 1
    return circle(f, g) - circle(g, f).scale(sign)


# -- mixed binary components ---------------------------------------------------


class MixedMap:
    """H^{(x)2}-linear map g (x) h -> H^{(x)2} (x)_H target (no symmetry constraint)."""

    __slots__ = ("gmod", "hmod", "target", "table")

    def __init__(self, gmod, hmod, target, table):
        self.gmod = gmod
        self.hmod = hmod
        self.target = target
        self.table = {}
        for (i, j), v in table.items():
            if v.arity != 2 or v.module != target:
                raise InputError("mixed map value has wrong arity or module")
            if not v.is_zero():
                self.table[(i, j)] = v

    @classmethod
    def zero(cls, gmod, hmod, target):
        return cls(gmod, hmod, target, {})

    def is_zero(self):
        return not self.table

    def value(self, i: int, j: int) -> PTElem:
        return self.table.get((i, j), PTElem.zero(self.target, 2))

    def eval(self, x: MElem, u: MElem) -> PTElem:
        from .ptensor import act

        acc = PTElem.zero(self.target, 2)
        for i, hx in sorted(x.coords.items()):
            for j, hu in sorted(u.coords.items()):
                base = self.value(i, j)
                if base.is_zero():
                    continue
                acc = acc + act(HTensor.from_legs([hx, hu]), base)
        return acc

    def __add__(self, other: "MixedMap") -> "MixedMap":
        out = dict(self.table)
        for key, v in other.table.items():
            cur = out.get(key)
            out[key] = v if cur is None else cur + v
        return MixedMap(self.gmod, self.hmod, self.target, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "MixedMap":
        return MixedMap(
            self.gmod,
            self.hmod,
            self.target,
            {k: v.scale(c) for k, v in self.table.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, MixedMap):
            return NotImplemented
        keys = set(self.table) | set(other.table)
        return (self.gmod, self.hmod, self.target) == (
            other.gmod,
            other.hmod,
            other.target,
        ) and all(self.value(*k) == other.value(*k) for k in keys)

    def __repr__(self):
        return f"MixedMap({self.gmod.name}(x){self.hmod.name}->{self.target.name})"


# -- lifts to the direct sum ----------------------------------------------------


def _coerce_to_sum(v: PTElem, G: FreeModule, part: str) -> PTElem:
    offset = 0 if part == "g" else G.split
    return v.coerce(G, lambda k: k + offset)


def _part_of_target(G: FreeModule, target: FreeModule) -> str:
    g, h = G.parts
    if target == g:
        return "g"
    if target == h:
        return "h"
    raise InputError(f"target {target.name} is not a part of {G.name}")


def lift_block(f: Cochain, G: FreeModule) -> Cochain:
    """Lift of a pure-block cochain (source g^k or h^l) into C(g [+] h).

    The shuffle sum of the general lift collapses to one term on sorted
    tuples; all other orderings are recovered by the slot action.
    """
    g, h = G.parts
    if f.source == g:
        shift = 0
    elif f.source == h:
        shift = G.split
    else:
        raise InputError("lift_block: source is not a part of the sum")
    tpart = _part_of_target(G, f.target)
    table = {}
    for t, v in f.table.items():
        table[tuple(i + shift for i in t)] = _coerce_to_sum(v, G, tpart)
    return Cochain(f.arity, G, G, table)


def lift_mixed(m: MixedMap, G: FreeModule) -> Cochain:
    """Lift of a g (x) h component into C^2(g [+] h); Koszul-shuffle built in."""
    if (m.gmod, m.hmod) != G.parts:
        raise InputError("lift_mixed: parts mismatch")
    tpart = _part_of_target(G, m.target)
    cut = G.split
    table = {}
    for (i, j), v in m.table.items():
        table[(i, cut + j)] = _coerce_to_sum(v, G, tpart)
    return Cochain(2, G, G, table)


def extract_components(F: Cochain, patterns=None) -> dict:
    """Split a C(g [+] h) cochain by (input pattern, target part).

    Returns {(pattern, tpart): {part-index tuple: PTElem over G}} where
    pattern is e.g. ('g','g','h') in sorted-tuple order.  Zero values are
    dropped; missing keys mean zero.
    """
    G = F.source
    cut = G.split
    out = {}
    for t, v in F.table.items():
        pattern = tuple("g" if i < cut else "h" for i in t)
        local = tuple(i if i < cut else i - cut for i in t)
        vg, vh = v.split_by_part()
        for tpart, piece in (("g", vg), ("h", vh)):
            if piece.is_zero():
                continue
            if patterns is not None and (pattern, tpart) not in patterns:
                continue
            out.setdefault((pattern, tpart), {})[local] = piece
    return out


def extract_pure(F: Cochain, part: str, tpart: str) -> Cochain:
    """Extract the block with all inputs in one part as a block cochain."""
    G = F.source
    g, h = G.parts
    src = g if part == "g" else h
    tgt = g if tpart == "g" else h
    cut = G.split
    offset = 0 if part == "g" else cut
    toffset = 0 if tpart == "g" else cut
    table = {}
    for t, v in F.table.items():
        if not all((i < cut) == (part == "g") for i in t):
            continue
        piece = v.split_by_part()[0 if tpart == "g" else 1]
        if piece.is_zero():
            continue
        table[tuple(i - offset for i in t)] = piece.coerce(tgt, lambda k: k - toffset)
    return Cochain(F.arity, src, tgt, table)


def extract_mixed(F: Cochain, tpart: str) -> MixedMap:
    """Extract the g (x) h component of an arity-2 cochain on g [+] h."""
    if F.arity != 2:
        raise InputError("extract_mixed expects an arity-2 cochain")
    G = F.source
    g, h = G.parts
    cut = G.split
    tgt = g if tpart == "g" else h
    toffset = 0 if tpart == "g" else cut
    table = {}
    for (i, j), v in F.table.items():
        if i < cut <= j:
            piece = v.split_by_part()[0 if tpart == "g" else 1]
            if not piece.is_zero():
                table[(i, j - cut)] = piece.coerce(tgt, lambda k: k - toffset)
    return MixedMap(g, h, tgt, table)


def assert_block_shape(F: Cochain, pattern: tuple, tpart: str):
    """Check F is supported exactly on one (pattern, target) block."""
    comps = extract_components(F)
    stray = [key for key in comps if key != (pattern, tpart)]
    if stray:
        raise InputError(f"cochain has unexpected components at {stray}")


# -- bidegree -------------------------------------------------------------------


INHOMOGENEOUS = "inhomogeneous"
ZERO_BIDEGREE = "inhomogeneous-zero"


def bidegree_of(f: Cochain):
    """Bidegree k|l of a cochain on g [+] h, or an inhomogeneity marker.

    Case (i) blocks g^{k+1} h^l land in g; case (ii) blocks g^k h^{l+1} land
    in h; a homogeneous cochain touches only blocks of one (k, l).
    """
    candidates = set()
    for (pattern, tpart), entries in extract_components(f).items():
        if not entries:
            continue
        a = sum(1 for p in pattern if p == "g")
        b = len(pattern) - a
        if tpart == "g":
            candidates.add((a - 1, b))
        else:
            candidates.add((a, b - 1))
    if not candidates:
        return ZERO_BIDEGREE
    if len(candidates) == 1:
        return candidates.pop()
    return INHOMOGENEOUS


def transpose_last(f: Cochain) -> Cochain:
    """The (n-1, n) slot transposition of the conformal-map presentation.

    Realized through canonicalization: swapping the last two slots is where
    the antipode-twisted action lives.  Involutive; equals -f on skew input.
    """
    n = f.arity
    if n < 2:
        return f
    table = {}
    for t in f.table:
        swapped = list(t)
        swapped[-1], swapped[-2] = swapped[-2], swapped[-1]
        v = permute(f.value(tuple(swapped)), swap_dest(n, n - 2, n - 1))
        if not v.is_zero():
            table[t] = v
    return Cochain(n, f.source, f.target, table)


# -- seeded random values ---------------------------------------------------------


def random_ptelem(rng, module: FreeModule, arity: int, max_deg=2, nterms=2) -> PTElem:
    """Small random canonical value; coefficients in {-2..2}."""
    alg = module.alg
    terms = {}
    for _ in range(nterms):
        total = rng.randint(0, max_deg)
        weights = [rng.randint(0, total) for _ in range(arity)]
        cuts = sorted(rng.randint(0, total) for _ in range(arity - 1)) + [total]
        degs = [b - a for a, b in zip([0] + cuts[:-1], cuts)]

        def rand_mi(d):
            mi = [0] * alg.dim
            for _ in range(d):
                mi[rng.randrange(alg.dim)] += 1
            return tuple(mi)

        slots = tuple(rand_mi(d) for d in degs[: arity - 1])
        K = rand_mi(degs[arity - 1])
        c = Fraction(rng.choice([-2, -1, 1, 2]))
        key = (slots, K, rng.randrange(module.rank)) if module.rank else None
        if key is None:
            continue
        terms[key] = terms.get(key, ZERO) + c
    return PTElem(module, arity, terms)


def random_cochain(rng, source, target, arity, max_deg=2) -> Cochain:
    """Seeded random skew cochain (total skew-symmetrization of raw values)."""
    cache = {}

    def raw(t):
        if t not in cache:
            cache[t] = random_ptelem(rng, target, arity, max_deg=max_deg)
        return cache[t]

    return skew_symmetrize(arity, source, target, raw)
