"""Exact linear algebra over Q: fraction-free elimination and modular rank.

Rows are lists of Python integers (callers clear denominators with
:func:`integer_row`).  Modular arithmetic is only ever used to *select*
pivots or to certify rank from below; every solution returned here is
computed and checked in exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

# primes below 2**31 so that products fit in int64
PRIMES = (2147483629, 2147483587, 2147483579, 2147483563, 2147483549)


class SingularMatrix(ArithmeticError):
    pass


def integer_row(coeffs: Sequence, rhs=0) -> tuple[list[int], int]:
    """Scale a rational row (and its right-hand side) to coprime integers."""
    vals = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
    den = 1
    for v in vals:
        if v.denominator != 1:
            den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints[:-1], ints[-1]


def bareiss_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve a square integer system by fraction-free (Bareiss) elimination.

    Pivoting takes the first nonzero entry at or below the diagonal.
    """
    n = len(a)
    m = [list(map(int, row)) + [int(rhs)] for row, rhs in zip(a, b)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise SingularMatrix(f"singular at column {k}")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        pk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            f = rowi[k]
            if f == 0:
                if pk != prev:
                    for j in range(k + 1, n + 1):
                        rowi[j] = rowi[j] * pk // prev
                rowi[k] = 0
                continue
            for j in range(k + 1, n + 1):
                rowi[j] = (rowi[j] * pk - f * rowk[j]) // prev
            rowi[k] = 0
        prev = pk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n])
        for j in range(i + 1, n):
            if m[i][j]:
                s -= m[i][j] * x[j]
        x[i] = s / m[i][i]
    return x


def echelon(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (nonzero echelon rows, pivot columns).

    Rows are reduced one at a time against the basis built so far, each kept
    primitive (content divided out), so intermediate growth stays modest.
    """
    basis: dict[int, list[int]] = {}
    for row in rows:
        r = list(map(int, row))
        for col in range(ncols):
            if not r[col]:
                continue
            piv = basis.get(col)
            if piv is None:
                g = 0
                for v in r:
                    g = gcd(g, v)
                if g > 1:
                    r = [v // g for v in r]
                if r[col] < 0:
                    r = [-v for v in r]
                basis[col] = r
                break
            f, p = r[col], piv[col]
            g = gcd(f, p)
            f //= g
            p //= g
            r = [p * x - f * y for x, y in zip(r, piv)]
    cols = sorted(basis)
    return [basis[c] for c in cols], cols


def rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    return len(echelon(rows, ncols)[1])


def modular_pivots(rows: Sequence[Sequence[int]], ncols: int, p: int = PRIMES[0]):
    """Gaussian elimination mod ``p``.

    Returns ``(pivot_rows, pivot_cols)``: for each pivot column, the index
    of the first remaining row that is nonzero there.  The square submatrix
    on these rows/columns is nonsingular mod ``p``, hence over Q.
    """
    if not rows or not ncols:
        return [], []
    mat = np.array([[v % p for v in row] for row in rows], dtype=np.int64)
    active = np.ones(mat.shape[0], dtype=bool)
    prow, pcol = [], []
    for j in range(ncols):
        cand = np.nonzero((mat[:, j] != 0) & active)[0]
        if cand.size == 0:
            continue
        r = int(cand[0])
        inv = pow(int(mat[r, j]), p - 2, p)
        mat[r] = (mat[r] * inv) % p
        others = cand[1:]
        if others.size:
            factors = mat[others, j][:, None]
            mat[others] = (mat[others] - (factors * mat[r]) % p) % p
        active[r] = False
        prow.append(r)
        pcol.append(j)
    return prow, pcol


def solve_full_column_rank(
    rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int
) -> list[Fraction] | None:
    """Unique exact solution if the matrix has full column rank, else ``None``.

    Consistency is *not* checked here; callers verify every row.
    """
    if ncols == 0:
        return []
    prow, _ = modular_pivots(rows, ncols)
    if len(prow) < ncols:
        # an unlucky prime can only lower the rank; confirm exactly
        if rank(rows, ncols) < ncols:
            return None
        for p in PRIMES[1:]:
            prow, _ = modular_pivots(rows, ncols, p)
            if len(prow) == ncols:
                break
        else:  # pragma: no cover - would need five unlucky primes
            raise ArithmeticError("could not certify pivots modulo the prime table")
    prow = sorted(prow)
    return bareiss_solve([rows[i] for i in prow], [rhs[i] for i in prow])
