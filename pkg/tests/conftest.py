import random
from fractions import Fraction

import pytest

from pseudoalg.hopf import LieAlgebra
from pseudoalg.ptensor import FreeModule, canonicalize
from pseudoalg.cochains import Cochain, MixedMap
from pseudoalg.structures import QuasiTwilled
from pseudoalg import zoo


@pytest.fixture
def qd():
    """H = Q[d]."""
    return LieAlgebra.abelian(["d"])


@pytest.fixture
def b2():
    """The 2-dim nonabelian algebra [a1, a2] = a2."""
    return zoo.nonabelian_2dim()


def pt(module, entries, arity=2):
    """Build a canonical value from (slot exponents..., K, basis, coeff) rows.

    For dim-1 Hopf bases the exponents are plain integers.
    """
    dim = module.alg.dim

    def mi(e):
        return tuple(e) if isinstance(e, (tuple, list)) else ((e,) if dim == 1 else e)

    raw = []
    for row in entries:
        slots = tuple(mi(e) for e in row[: arity ])
        K = mi(row[arity])
        raw.append((slots, K, row[arity + 1], Fraction(row[arity + 2])))
    return canonicalize(module, arity, raw)


def vir_value(module, k=0, scale=1):
    """(d (x) 1 - 1 (x) d) (x)_H e_k, the Virasoro bracket shape."""
    return pt(module, [(1, 0, 0, k, scale), (0, 1, 0, k, -scale)])


@pytest.fixture
def vir():
    return zoo.virasoro()


@pytest.fixture
def modified_r_q():
    """The modified r-matrix structure over Virasoro with weight 4."""
    return zoo.build(zoo.MODIFIED_R, {"algebra": zoo.virasoro(), "weight": Fraction(4)})


@pytest.fixture
def reynolds_q():
    b = zoo.demo_bundle(zoo.REYNOLDS)
    return b["Q"]


@pytest.fixture
def rng():
    return random.Random(20250810)
