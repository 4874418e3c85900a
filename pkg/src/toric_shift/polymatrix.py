"""Matrices over the integral coefficient ring Lambda[u0, y] (and friends).

Matrices are lists of rows of :class:`EqPoly`.  Elimination is fraction
free (Bareiss): every division performed is exact.
"""
from __future__ import annotations

from typing import Sequence

from .eqring import EqPoly, EqRing
from .errors import NotDivisible

Matrix = list  # list[list[EqPoly]]


def identity(ring: EqRing, n: int) -> Matrix:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    ring = A[0][0].ring
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = ring.zero
            for k, a in enumerate(row):
                if a and B[k][j]:
                    acc = acc + a * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def map_entries(A: Matrix, f) -> Matrix:
    return [[f(a) for a in row] for row in A]


def exact_divide(a: EqPoly, b: EqPoly) -> EqPoly:
    """Return c with b * c == a, raising NotDivisible if none exists.

    Long division under the lexicographic order on exponent tuples.  The
    quotient's exponents are confined to a box determined by the supports of
    a and b, which bounds the loop even when the division is not exact.
    """
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    ring = a.ring
    if not a:
        return ring.zero
    width = ring.width
    lo = [min(k[p] for k in a.terms) - max(k[p] for k in b.terms) for p in range(width)]
    hi = [max(k[p] for k in a.terms) - min(k[p] for k in b.terms) for p in range(width)]
    qstop = ring.rank  # positions below this are Laurent (q) exponents
    lb = max(b.terms)
    cb = b.terms[lb]
    rem = dict(a.terms)
    quot: dict[tuple, int] = {}
    while rem:
        la = max(rem)
        ca = rem[la]
        t = tuple(x - y for x, y in zip(la, lb))
        if ca % cb or any(
            t[p] < lo[p] or t[p] > hi[p] or (p >= qstop and t[p] < 0) for p in range(width)
        ):
            raise NotDivisible(f"{b} does not divide {a}")
        c = ca // cb
        quot[t] = c
        for kb, vb in b.terms.items():
            k = tuple(x + y for x, y in zip(t, kb))
            v = rem.get(k, 0) - c * vb
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return EqPoly(ring, quot)


def determinant(M: Matrix, ring: EqRing = None) -> EqPoly:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        if ring is None:
            raise ValueError("ring required for the empty determinant")
        return ring.one
    ring = ring or M[0][0].ring
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    A = [list(row) for row in M]
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not A[k][k]:
            p = next((i for i in range(k + 1, n) if A[i][k]), None)
            if p is None:
                return ring.zero
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = exact_divide(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign


def rank(M: Matrix) -> int:
    """Rank over the fraction field of the coefficient ring."""
    A = [list(row) for row in M]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    ring = A[0][0].ring
    prev = ring.one
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                A[i][j] = exact_divide(A[i][j] * A[r][c] - A[i][c] * A[r][j], prev)
            A[i][c] = ring.zero
        prev = A[r][c]
        r += 1
        if r == rows:
            break
    return r


def minor(M: Matrix, i: int, j: int) -> Matrix:
    return [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]


def adjugate(M: Matrix, ring: EqRing) -> Matrix:
    n = len(M)
    if n == 1:
        return [[ring.one]]
    return [
        [determinant(minor(M, j, i), ring) * (-1 if (i + j) % 2 else 1) for j in range(n)]
        for i in range(n)
    ]


def format_matrix(M: Matrix) -> list[list[str]]:
    return [[str(a) for a in row] for row in M]


def is_identity(M: Matrix) -> bool:
    return all((a == 1) if i == j else not a for i, row in enumerate(M) for j, a in enumerate(row))


def unit_inverse(u: EqPoly) -> EqPoly:
    """Inverse of a unit +-q^A of the coefficient ring."""
    if len(u) != 1:
        raise NotDivisible(f"{u} is not a unit")
    ((key, c),) = u.terms.items()
    ring = u.ring
    if abs(c) != 1 or any(key[ring.rank:]):
        raise NotDivisible(f"{u} is not a unit")
    return EqPoly(ring, {tuple(-e for e in key[: ring.rank]) + key[ring.rank:]: c})


def scale(M: Matrix, s: EqPoly) -> Matrix:
    return [[a * s for a in row] for row in M]


def transpose(M: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*M)]
