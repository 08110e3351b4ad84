"""Exact arithmetic in H = U(b) for a finite-dimensional Lie algebra b.

Elements are stored in the divided-power PBW basis a^(K) = prod_i a_i^{k_i}/k_i!
indexed by multi-indices K.  In this basis the coproduct is literally
Delta(a^(K)) = sum_{L <= K} a^(L) (x) a^(K-L), and products of divided powers
stay integral for abelian b.  All scalars are exact rationals; there is no
floating point anywhere in this package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

Rat = Fraction
MultiIndex = tuple  # tuple[int, ...] of length alg.dim

ZERO = Fraction(0)
ONE = Fraction(1)


class InputError(ValueError):
    """Bad user input (wrong dimensions, malformed data)."""


class InternalInvariantError(RuntimeError):
    """A structural invariant the kernel relies on was violated."""


def _as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class LieAlgebra:
    """A finite-dimensional Lie algebra b given by exact structure constants.

    brackets[(i, j)] is the sparse row {k: c} meaning [a_i, a_j] = sum_k c a_k,
    stored for i < j only.  Antisymmetry and the Jacobi identity are checked
    exactly at construction.
    """

    def __init__(self, names, brackets=None):
        self.names = tuple(str(n) for n in names)
        if len(set(self.names)) != len(self.names):
            raise InputError("generator names must be unique")
        self.dim = len(self.names)
        table = {}
        for (i, j), row in (brackets or {}).items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise InputError(f"bracket index ({i},{j}) out of range")
            if i == j:
                if any(_as_rat(c) != 0 for c in row.values()):
                    raise InputError(f"[a_{i}, a_{i}] must vanish")
                continue
            clean = {k: _as_rat(c) for k, c in row.items() if _as_rat(c) != 0}
            if not clean:
                continue
            if i > j:
                i, j, clean = j, i, {k: -c for k, c in clean.items()}
            if (i, j) in table and table[(i, j)] != clean:
                raise InputError(f"conflicting entries for bracket ({i},{j})")
            table[(i, j)] = clean
        self._brackets = table
        self._check_jacobi()
        self.zero_index: MultiIndex = (0,) * self.dim
        self._straighten_cache = {}
        self._antipode_cache = {}

    @classmethod
    def abelian(cls, names):
        return cls(names, {})

    def bracket(self, i: int, j: int) -> dict:
        """Structure constants of [a_i, a_j] as a sparse row {k: c}."""
        if i == j:
            return {}
        if i < j:
            return self._brackets.get((i, j), {})
        return {k: -c for k, c in self._brackets.get((j, i), {}).items()}

    def _check_jacobi(self):
        for i, j, k in itertools.combinations(range(self.dim), 3):
            acc = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, cm in self.bracket(a, b).items():
                    for l, cl in self.bracket(m, c).items():
                        acc[l] = acc.get(l, ZERO) + cm * cl
            if any(v != 0 for v in acc.values()):
                raise InputError(
                    f"structure constants violate the Jacobi identity at ({i},{j},{k})"
                )

    # -- multi-index helpers -------------------------------------------------

    def mono(self, K: MultiIndex) -> "HElem":
        return HElem(self, {tuple(K): ONE})

    def unit(self) -> "HElem":
        return self.mono(self.zero_index)

    def gen(self, i: int) -> "HElem":
        K = list(self.zero_index)
        K[i] = 1
        return self.mono(tuple(K))

    def zero(self) -> "HElem":
        return HElem(self, {})

    # -- straightening -------------------------------------------------------

    def _straighten(self, word: tuple) -> dict:
        """PBW-normalize the word a_{w1} a_{w2} ... ; returns {K: coeff}.

        Recursion on (degree, inversion count): swapping the first strict
        descent either keeps the degree and lowers the inversion count, or
        contracts to a shorter word through the bracket.
        """
        cached = self._straighten_cache.get(word)
        if cached is not None:
            return cached
        descent = -1
        for t in range(len(word) - 1):
            if word[t] > word[t + 1]:
                descent = t
                break
        if descent < 0:
            K = [0] * self.dim
            coeff = ONE
            for g in word:
                K[g] += 1
                coeff *= K[g]  # sorted word a_i^k = k! a_i^(k), built up stepwise
            result = {tuple(K): coeff}
        else:
            i, j = word[descent], word[descent + 1]
            swapped = word[:descent] + (j, i) + word[descent + 2 :]
            result = dict(self._straighten(swapped))
            head, tail = word[:descent], word[descent + 2 :]
            for k, c in self.bracket(i, j).items():
                for K, c2 in self._straighten(head + (k,) + tail).items():
                    v = result.get(K, ZERO) + c * c2
                    if v:
                        result[K] = v
                    else:
                        result.pop(K, None)
        self._straighten_cache[word] = result
        return result

    def mul_mono(self, I: MultiIndex, J: MultiIndex) -> dict:
        """Product a^(I) a^(J) in the divided-power PBW basis, as {K: coeff}."""
        key = ("mul", I, J)
        cached = self._straighten_cache.get(key)
        if cached is not None:
            return cached
        word = []
        scale = ONE
        for K in (I, J):
            for g, k in enumerate(K):
                word.extend([g] * k)
                scale /= factorial(k)
        result = {K: c * scale for K, c in self._straighten(tuple(word)).items()}
        self._straighten_cache[key] = result
        return result

    def antipode_mono(self, K: MultiIndex) -> dict:
        """S(a^(K)): reverse the factors, negate the generators, restraighten."""
        cached = self._antipode_cache.get(K)
        if cached is not None:
            return cached
        sign = -ONE if sum(K) % 2 else ONE
        acc = {self.zero_index: sign}
        for g in range(self.dim - 1, -1, -1):
            if K[g] == 0:
                continue
            Kg = list(self.zero_index)
            Kg[g] = K[g]
            step = {}
            for L, c in acc.items():
                for M, c2 in self.mul_mono(L, tuple(Kg)).items():
                    v = step.get(M, ZERO) + c * c2
                    if v:
                        step[M] = v
                    else:
                        step.pop(M, None)
            acc = step
        self._antipode_cache[K] = acc
        return acc

    def __repr__(self):
        return f"LieAlgebra({list(self.names)})"

    def __eq__(self, other):
        return (
            isinstance(other, LieAlgebra)
            and self.names == other.names
            and self._brackets == other._brackets
        )

    def __hash__(self):
        return hash(self.names)


def mi_splits(K: MultiIndex, parts: int):
    """All decompositions of K into an ordered sum of `parts` multi-indices."""
    if parts == 1:
        yield (K,)
        return
    for L in itertools.product(*(range(k + 1) for k in K)):
        rest = tuple(k - l for k, l in zip(K, L))
        for tail in mi_splits(rest, parts - 1):
            yield (tuple(L),) + tail


def mi_degree(K: MultiIndex) -> int:
    return sum(K)


class HElem:
    """Sparse exact-rational element of H = U(b) in divided-power coordinates.

    Treated as immutable after construction; all operations return new values.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg: LieAlgebra, terms: dict):
        self.alg = alg
        self.terms = {K: c for K, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HElem):
            return NotImplemented
        return self.alg == other.alg and self.terms == other.terms

    def __add__(self, other: "HElem") -> "HElem":
        self._check(other)
        out = dict(self.terms)
        for K, c in other.terms.items():
            v = out.get(K, ZERO) + c
            if v:
                out[K] = v
            else:
                out.pop(K, None)
        return HElem(self.alg, out)

    def __sub__(self, other: "HElem") -> "HElem":
        return self + (-other)

    def __neg__(self) -> "HElem":
        return HElem(self.alg, {K: -c for K, c in self.terms.items()})

    def scale(self, c) -> "HElem":
        c = _as_rat(c)
        if c == 0:
            return HElem(self.alg, {})
        return HElem(self.alg, {K: c * v for K, v in self.terms.items()})

    def __mul__(self, other: "HElem") -> "HElem":
        """PBW product via straightening; exact."""
        self._check(other)
        out = {}
        for I, ci in self.terms.items():
            for J, cj in other.terms.items():
                for K, c in self.alg.mul_mono(I, J).items():
                    v = out.get(K, ZERO) + ci * cj * c
                    if v:
                        out[K] = v
                    else:
                        out.pop(K, None)
        return HElem(self.alg, out)

    def _check(self, other: "HElem"):
        if self.alg != other.alg:
            raise InputError("elements live over different base Lie algebras")

    def degree(self) -> int:
        """Maximal PBW degree of a term (-1 for zero)."""
        return max((mi_degree(K) for K in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.alg.names
        bits = []
        for K in sorted(self.terms):
            c = self.terms[K]
            mono = "*".join(
                f"{names[i]}^({k})" if k > 1 else names[i]
                for i, k in enumerate(K)
                if k
            )
            bits.append(f"{c}" if not mono else f"{c}*{mono}")
        return " + ".join(bits)


def counit(a: HElem) -> Fraction:
    """epsilon(a): the coefficient of the empty multi-index."""
    return a.terms.get(a.alg.zero_index, ZERO)


def antipode(a: HElem) -> HElem:
    out = {}
    for K, c in a.terms.items():
        for L, c2 in a.alg.antipode_mono(K).items():
            v = out.get(L, ZERO) + c * c2
            if v:
                out[L] = v
            else:
                out.pop(L, None)
    return HElem(a.alg, out)


class HTensor:
    """Sparse element of H^{(x) n}: finite map from multi-index tuples to rationals."""

    __slots__ = ("alg", "arity", "terms")

    def __init__(self, alg: LieAlgebra, arity: int, terms: dict):
        if arity < 1:
            raise InputError("tensor arity must be >= 1")
        self.alg = alg
        self.arity = arity
        self.terms = {tuple(K): c for K, c in terms.items() if c}

    @classmethod
    def unit(cls, alg: LieAlgebra, arity: int) -> "HTensor":
        return cls(alg, arity, {(alg.zero_index,) * arity: ONE})

    @classmethod
    def from_legs(cls, legs) -> "HTensor":
        """Tensor product of a list of HElems, expanded to monomial tuples."""
        legs = list(legs)
        alg = legs[0].alg
        terms = {(): ONE}
        for leg in legs:
            nxt = {}
            for tup, c in terms.items():
                for K, c2 in leg.terms.items():
                    nxt[tup + (K,)] = c * c2
            terms = nxt
        return cls(alg, len(legs), terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, HTensor):
            return NotImplemented
        return (
            self.alg == other.alg
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __add__(self, other: "HTensor") -> "HTensor":
        if self.arity != other.arity or self.alg != other.alg:
            raise InputError("tensor arity/base mismatch")
        out = dict(self.terms)
        for K, c in other.terms.items():
            v = out.get(K, ZERO) + c
            if v:
                out[K] = v
            else:
                out.pop(K, None)
        return HTensor(self.alg, self.arity, out)

    def __neg__(self) -> "HTensor":
        return HTensor(self.alg, self.arity, {K: -c for K, c in self.terms.items()})

    def __sub__(self, other: "HTensor") -> "HTensor":
        return self + (-other)

    def scale(self, c) -> "HTensor":
        c = _as_rat(c)
        return HTensor(self.alg, self.arity, {K: c * v for K, v in self.terms.items()})

    def __mul__(self, other: "HTensor") -> "HTensor":
        """Componentwise product in H^{(x) n}; exercises straightening."""
        if self.arity != other.arity or self.alg != other.alg:
            raise InputError("tensor arity/base mismatch")
        out = {}
        for I, ci in self.terms.items():
            for J, cj in other.terms.items():
                legs = [HElem(self.alg, self.alg.mul_mono(a, b)) for a, b in zip(I, J)]
                for tup, c in HTensor.from_legs(legs).terms.items():
                    v = out.get(tup, ZERO) + ci * cj * c
                    if v:
                        out[tup] = v
                    else:
                        out.pop(tup, None)
        return HTensor(self.alg, self.arity, out)

    def leg(self, j: int) -> "dict":
        """Marginal view used by tests; terms grouped by the j-th slot."""
        out = {}
        for K, c in self.terms.items():
            out.setdefault(K[j], []).append((K, c))
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for K in sorted(self.terms):
            mono = " (x) ".join(str(k) for k in K)
            bits.append(f"{self.terms[K]}*[{mono}]")
        return " + ".join(bits)


def coproduct_iter(a: HElem, p: int) -> HTensor:
    """Delta^p(a) as an HTensor of arity p+1: sum over all splits of each K."""
    if p < 1:
        raise InputError("iterated coproduct needs p >= 1")
    out = {}
    for K, c in a.terms.items():
        for split in mi_splits(K, p + 1):
            v = out.get(split, ZERO) + c
            if v:
                out[split] = v
            else:
                out.pop(split, None)
    return HTensor(a.alg, p + 1, out)


def sweedler_legs(a: HElem, p: int, q: int) -> HTensor:
    """(S^{(x)p} (x) 1^{(x)q}) Delta^{p+q-1}(a); the negative-leg notation."""
    if p < 0 or q < 1:
        raise InputError("need p >= 0 and q >= 1")
    if p + q == 1:
        return HTensor(a.alg, 1, {(K,): c for K, c in a.terms.items()})
    full = coproduct_iter(a, p + q - 1)
    if p == 0:
        return full
    alg = a.alg
    out = HTensor(alg, p + q, {})
    for tup, c in full.terms.items():
        legs = [HElem(alg, alg.antipode_mono(K)) for K in tup[:p]]
        legs += [alg.mono(K) for K in tup[p:]]
        out = out + HTensor.from_legs(legs).scale(c)
    return out
