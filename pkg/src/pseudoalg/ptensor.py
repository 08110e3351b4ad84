"""Canonical forms and slot operations for elements of H^{(x)n} (x)_H M.

The canonical form fixes the last tensor slot to 1: every element is written
as  sum (a^(I_1) (x) ... (x) a^(I_{n-1}) (x) 1) (x)_H a^(K) e_k,  so a term is
keyed by (slots, K, k).  Equality of canonical term maps is the decision
procedure behind every residual check in this package.

Permutations are handled concretely as placement arrays: `dest[j]` is the
position that receives the content currently in slot j (0-based).  This is the
contents-move action; applied to group elements it composes covariantly, which
is what the shuffle sums in the cochain calculus require.
"""

from __future__ import annotations

from fractions import Fraction

from .hopf import (
    HElem,
    HTensor,
    InputError,
    LieAlgebra,
    MultiIndex,
    ONE,
    ZERO,
    mi_degree,
    mi_splits,
)


class FreeModule:
    """A finitely generated free left H-module with a named basis.

    A module may record a two-part split (direct sum g [+] h); basis indices
    then run over g's basis followed by h's.
    """

    def __init__(self, name: str, basis, alg: LieAlgebra, parts=None):
        self.name = str(name)
        self.basis = tuple(str(b) for b in basis)
        if len(set(self.basis)) != len(self.basis):
            raise InputError(f"module {name!r} has duplicate basis names")
        self.alg = alg
        self.rank = len(self.basis)
        self.parts = parts  # None, or (g: FreeModule, h: FreeModule)
        if parts is not None:
            g, h = parts
            if g.alg != alg or h.alg != alg:
                raise InputError("direct-sum parts must share the Hopf base")
            if self.basis != g.basis + h.basis:
                raise InputError("direct-sum basis must concatenate the parts")

    @classmethod
    def direct_sum(cls, g: "FreeModule", h: "FreeModule", name=None) -> "FreeModule":
        return cls(
            name or f"{g.name}[+]{h.name}", g.basis + h.basis, g.alg, parts=(g, h)
        )

    @property
    def split(self) -> int:
        """Index where the h-part starts (rank of the g-part)."""
        if self.parts is None:
            raise InputError(f"module {self.name!r} carries no recorded split")
        return self.parts[0].rank

    def part_of(self, k: int) -> str:
        return "g" if k < self.split else "h"

    def elem(self, k: int, coeff: HElem | None = None) -> "MElem":
        return MElem(self, {k: coeff if coeff is not None else self.alg.unit()})

    def zero_elem(self) -> "MElem":
        return MElem(self, {})

    def __eq__(self, other):
        return (
            isinstance(other, FreeModule)
            and self.name == other.name
            and self.basis == other.basis
            and self.alg == other.alg
        )

    def __hash__(self):
        return hash((self.name, self.basis))

    def __repr__(self):
        return f"FreeModule({self.name!r}, rank={self.rank})"


class MElem:
    """Element of a free module: sparse map basis index -> HElem."""

    __slots__ = ("module", "coords")

    def __init__(self, module: FreeModule, coords: dict):
        self.module = module
        self.coords = {k: h for k, h in coords.items() if h}
        for k in self.coords:
            if not 0 <= k < module.rank:
                raise InputError(f"basis index {k} out of range for {module.name}")

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, MElem):
            return NotImplemented
        return self.module == other.module and self.coords == other.coords

    def __add__(self, other: "MElem") -> "MElem":
        if self.module != other.module:
            raise InputError("module mismatch")
        out = dict(self.coords)
        for k, h in other.coords.items():
            s = out.get(k)
            out[k] = h if s is None else s + h
        return MElem(self.module, out)

    def __neg__(self):
        return MElem(self.module, {k: -h for k, h in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MElem":
        return MElem(self.module, {k: h.scale(c) for k, h in self.coords.items()})

    def act(self, h: HElem) -> "MElem":
        return MElem(self.module, {k: h * v for k, v in self.coords.items()})

    def __repr__(self):
        if not self.coords:
            return "0"
        return " + ".join(
            f"({h})*{self.module.basis[k]}" for k, h in sorted(self.coords.items())
        )


class PTElem:
    """Element of H^{(x)n} (x)_H M in last-slot-normalized canonical form.

    terms: {(slots, K, k): coeff} with slots a tuple of n-1 multi-indices,
    a^(K) the H-coefficient on the module generator e_k.
    """

    __slots__ = ("module", "arity", "terms")

    def __init__(self, module: FreeModule, arity: int, terms: dict):
        if arity < 1:
            raise InputError("pseudotensor arity must be >= 1")
        self.module = module
        self.arity = arity
        self.terms = {t: c for t, c in terms.items() if c}

    @classmethod
    def zero(cls, module: FreeModule, arity: int) -> "PTElem":
        return cls(module, arity, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PTElem):
            return NotImplemented
        return (
            self.module == other.module
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __add__(self, other: "PTElem") -> "PTElem":
        if self.module != other.module or self.arity != other.arity:
            raise InputError("pseudotensor arity/module mismatch")
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = out.get(t, ZERO) + c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return PTElem(self.module, self.arity, out)

    def __neg__(self):
        return PTElem(self.module, self.arity, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PTElem":
        c = Fraction(c)
        if c == 0:
            return PTElem.zero(self.module, self.arity)
        return PTElem(self.module, self.arity, {t: c * v for t, v in self.terms.items()})

    def degree(self) -> int:
        """Max total PBW degree (slots plus module coefficient); -1 for zero."""
        return max(
            (
                sum(mi_degree(I) for I in slots) + mi_degree(K)
                for (slots, K, _k) in self.terms
            ),
            default=-1,
        )

    def map_module(self, fn) -> "PTElem":
        """Push an H-linear map through the module part; fn(k) -> MElem."""
        out = None
        alg = self.module.alg
        for (slots, K, k), c in self.terms.items():
            img = fn(k)
            if img.is_zero():
                continue
            target = img.module
            if out is None:
                out = {}
            for k2, h in img.coords.items():
                for K2, c2 in (alg.mono(K) * h).terms.items():
                    key = (slots, K2, k2)
                    v = out.get(key, ZERO) + c * c2
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        if out is None:
            raise InputError("map_module needs at least one nonzero image to infer the target")
        return PTElem(target, self.arity, out)

    def split_by_part(self) -> tuple["PTElem", "PTElem"]:
        """Split the module part of a direct-sum-valued element into (g, h)."""
        cut = self.module.split
        g, h = {}, {}
        for t, c in self.terms.items():
            (g if t[2] < cut else h)[t] = c
        return (
            PTElem(self.module, self.arity, g),
            PTElem(self.module, self.arity, h),
        )

    def coerce(self, module: FreeModule, index_map=None) -> "PTElem":
        """Reinterpret over another module; index_map sends old k to new k."""
        out = {}
        for (slots, K, k), c in self.terms.items():
            k2 = index_map(k) if index_map else k
            if not 0 <= k2 < module.rank:
                raise InputError("coercion index out of range")
            out[(slots, K, k2)] = out.get((slots, K, k2), ZERO) + c
        return PTElem(module, self.arity, {t: c for t, c in out.items() if c})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (slots, K, k), c in sorted(self.terms.items()):
            slot_str = " (x) ".join(str(s) for s in slots + ((),))
            bits.append(f"{c}*[{slot_str}](x)_H {K}.{self.module.basis[k]}")
        return " + ".join(bits)


# -- canonicalization ---------------------------------------------------------


def _canonical_last_slot(alg: LieAlgebra, n: int, J: MultiIndex):
    """Expansion of (1 (x) ... (x) a^(J)) (x)_H  into canonical pieces.

    Returns a cached list of (legs, right) with legs a tuple of n-1 monomial
    HElems (antipode factors) and right the H-multiple landing on the module:
    (h1 ... hn)(x)_H m = (h1 S(J_(1)) (x) ... (x) h_{n-1} S(J_(n-1)) (x) 1)(x)_H J_(n) m.
    """
    key = ("canon", n, J)
    cached = alg._straighten_cache.get(key)
    if cached is not None:
        return cached
    pieces = []
    for split in mi_splits(J, n):
        legs = tuple(HElem(alg, alg.antipode_mono(L)) for L in split[: n - 1])
        pieces.append((legs, split[n - 1]))
    alg._straighten_cache[key] = pieces
    return pieces


def canonicalize(module: FreeModule, arity: int, raw_terms) -> PTElem:
    """Canonicalize raw terms (slot monomials of length `arity`, K, k, coeff).

    Applies the (x)_H straightening relation to force the last slot to 1.
    Idempotent: canonical input passes through unchanged.
    """
    alg = module.alg
    out = {}

    def _emit(slots, K, k, c):
        key = (slots, K, k)
        v = out.get(key, ZERO) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    zero_mi = alg.zero_index
    for slots, K, k, c in raw_terms:
        if len(slots) != arity:
            raise InputError("raw term has wrong number of slots")
        if not 0 <= k < module.rank:
            raise InputError("raw term has bad basis index")
        last = slots[-1]
        if last == zero_mi:
            _emit(tuple(slots[:-1]), K, k, c)
            continue
        if arity == 1:
            for K2, c2 in alg.mul_mono(last, K).items():
                _emit((), K2, k, c * c2)
            continue
        for legs, right in _canonical_last_slot(alg, arity, last):
            for K2, cK in alg.mul_mono(right, K).items():
                # expand the slot products h_i * S(J_(i)) termwise
                partial = [((), ONE)]
                for h_i, s_leg in zip(slots[:-1], legs):
                    nxt = []
                    for prefix, cp in partial:
                        for L, cl in s_leg.terms.items():
                            for Mi, cm in alg.mul_mono(h_i, L).items():
                                nxt.append((prefix + (Mi,), cp * cl * cm))
                    partial = nxt
                for prefix, cp in partial:
                    _emit(prefix, K2, k, c * cK * cp)
    return PTElem(module, arity, out)


def from_melem_tensor(coeffs: HTensor, m: MElem) -> PTElem:
    """Build (c1 (x) ... (x) cn) (x)_H m from an explicit coefficient tensor."""
    raw = []
    for tup, c in coeffs.terms.items():
        for k, h in m.coords.items():
            for K, c2 in h.terms.items():
                raw.append((tup, K, k, c * c2))
    return canonicalize(m.module, coeffs.arity, raw)


def _explicit_terms(e: PTElem):
    """Iterate terms with the implicit last slot made explicit."""
    zero_mi = e.module.alg.zero_index
    for (slots, K, k), c in e.terms.items():
        yield slots + (zero_mi,), K, k, c


def act(c: HTensor, e: PTElem) -> PTElem:
    """Left multiplication of the n slots by a coefficient tensor."""
    if c.arity != e.arity:
        raise InputError("act: tensor arity mismatch")
    if c.alg != e.module.alg:
        raise InputError("act: Hopf base mismatch")
    alg = c.alg
    raw = []
    for mult, cm in c.terms.items():
        for slots, K, k, ce in _explicit_terms(e):
            partial = [((), ONE)]
            for h, s in zip(mult, slots):
                nxt = []
                for prefix, cp in partial:
                    for Mi, cmm in alg.mul_mono(h, s).items():
                        nxt.append((prefix + (Mi,), cp * cmm))
                partial = nxt
            for prefix, cp in partial:
                raw.append((prefix, K, k, cm * ce * cp))
    return canonicalize(e.module, e.arity, raw)


def permute(e: PTElem, dest) -> PTElem:
    """Move slot contents: content of slot j lands at position dest[j] (0-based)."""
    dest = tuple(dest)
    n = e.arity
    if sorted(dest) != list(range(n)):
        raise InputError(f"not a placement array of size {n}: {dest}")
    if dest == tuple(range(n)):
        return e
    raw = []
    for slots, K, k, c in _explicit_terms(e):
        new_slots = [None] * n
        for j, s in enumerate(slots):
            new_slots[dest[j]] = s
        raw.append((tuple(new_slots), K, k, c))
    return canonicalize(e.module, n, raw)


def swap_dest(n: int, i: int, j: int) -> tuple:
    """Placement array for the transposition of slots i and j (0-based)."""
    dest = list(range(n))
    dest[i], dest[j] = j, i
    return tuple(dest)


def perm_sign(perm) -> int:
    """Parity of a permutation given as a placement/image array."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def linear_combine(pairs) -> PTElem:
    """Exact sparse sum of (rational, PTElem) pairs; zero terms dropped."""
    pairs = [(Fraction(c), e) for c, e in pairs]
    if not pairs:
        raise InputError("linear_combine needs at least one pair")
    acc = PTElem.zero(pairs[0][1].module, pairs[0][1].arity)
    for c, e in pairs:
        acc = acc + e.scale(c)
    return acc
