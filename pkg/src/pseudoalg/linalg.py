"""Exact linear algebra over the rationals.

Two independent routes are kept deliberately: fraction-free Bareiss
elimination on integer-cleared matrices (the production path) and plain
Gaussian elimination over Fraction (the oracle the tests compare against).
Matrices are dense lists of Fraction rows; sizes here stay small.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _clear_row(row):
    """Scale a rational row to coprime integers."""
    den = 1
    for x in row:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def bareiss_echelon(rows):
    """Fraction-free row echelon form of a rational matrix.

    Returns (echelon integer rows, pivot column list).  Division steps are
    exact by the Bareiss identity, so intermediate entries stay integral.
    """
    m = [_clear_row([Fraction(x) for x in row]) for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    _ech, pivots = bareiss_echelon(rows)
    return len(pivots)


def nullspace(rows, ncols=None):
    """Basis of the right kernel, as Fraction vectors (production path)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return [_unit(ncols, i) for i in range(ncols)]
    ech, pivots = bareiss_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        # back-substitute through the echelon rows
        for ri in range(len(pivots) - 1, -1, -1):
            pc = pivots[ri]
            s = sum((Fraction(ech[ri][c]) * vec[c] for c in range(pc + 1, ncols)), Fraction(0))
            vec[pc] = -s / Fraction(ech[ri][pc])
        basis.append(vec)
    return basis


def _unit(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def rank_dense(rows) -> int:
    """Plain Gaussian elimination over Fraction; the independent oracle."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c] / inv
                for j in range(c, ncols):
                    m[i][j] -= f * m[r][j]
        r += 1
        if r == nrows:
            break
    return r


def nullspace_dense(rows, ncols=None):
    """Kernel basis via reduced row echelon over Fraction (oracle)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return [_unit(ncols, i) for i in range(ncols)]
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -m[ri][fc]
        basis.append(vec)
    return basis


def image_dim_within(cols, inside_idx) -> int:
    """dim { v in column-span(cols) : v supported on inside_idx }.

    cols are Fraction column vectors.  Solve for the kernel of the outside
    block, then take the rank of the inside block on that kernel.
    """
    if not cols:
        return 0
    n = len(cols[0])
    inside = sorted(inside_idx)
    inside_set = set(inside)
    outside = [i for i in range(n) if i not in inside_set]
    out_rows = [[col[i] for col in cols] for i in outside]
    out_rows = [row for row in out_rows if any(row)]
    if out_rows:
        ker = nullspace(out_rows, ncols=len(cols))
    else:
        ker = [_unit(len(cols), i) for i in range(len(cols))]
    if not ker:
        return 0
    inside_rows = []
    for vec in ker:
        img = [
            sum((vec[j] * cols[j][i] for j in range(len(cols))), Fraction(0))
            for i in inside
        ]
        inside_rows.append(img)
    return rank(inside_rows)
