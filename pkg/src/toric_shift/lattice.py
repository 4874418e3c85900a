"""Exact integer and rational linear algebra on small lattices.

Vectors are plain tuples of Python ints (arbitrary precision); matrices are
lists of row tuples.  Nothing here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .errors import NormalsDoNotSpan, NotInSupport, NotUnimodular

IntVector = tuple  # tuple[int, ...]


def pairing(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence, b: Sequence) -> tuple:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def combination(coeffs: Sequence, vectors: Sequence[Sequence]) -> tuple:
    """Return sum_i coeffs[i] * vectors[i]."""
    if not vectors:
        raise ValueError("empty combination has no dimension")
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        for k, x in enumerate(v):
            out[k] += c * x
    return tuple(out)


# ---------------------------------------------------------------------------
# rational linear algebra
# ---------------------------------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve_combination(rows: Sequence[Sequence], target: Sequence) -> Optional[list[Fraction]]:
    """Find rational a with sum_i a[i] * rows[i] == target, or None.

    When the rows are dependent an arbitrary particular solution is returned.
    """
    k = len(rows)
    if k == 0:
        return [] if all(t == 0 for t in target) else None
    # columns of the augmented system are the given rows
    system = [[rows[i][c] for i in range(k)] + [target[c]] for c in range(len(target))]
    red, piv = rref(system)
    if k in piv:
        return None
    sol = [Fraction(0)] * k
    for row, c in zip(red, piv):
        sol[c] = row[k]
    return sol


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in matrix]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[tuple]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, entries above each pivot lie in [0, pivot), and zero
    rows are dropped, so the output depends only on the lattice.
    """
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # Euclid down the column until a single nonzero entry remains
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    f = m[i][c] // m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                f = m[i][c] // m[r][c]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [tuple(row) for row in m[:r]]


def kernel_basis(normals: Sequence[Sequence[int]]) -> list[tuple]:
    """Z-basis of {A in Z^N : sum_i A_i * normals[i] = 0}, in Hermite form.

    >>> kernel_basis([(-1, -1), (1, 0), (0, 1)])
    [(1, 1, 1)]
    """
    N = len(normals)
    if N == 0:
        raise NormalsDoNotSpan("no normals given")
    n = len(normals[0])
    if rank(normals) < n:
        raise NormalsDoNotSpan(f"normals span a sublattice of rank {rank(normals)} < {n}")
    # row-reduce [e_i | unit_i]; rows whose e-part vanishes carry kernel vectors
    aug = [list(e) + [int(i == j) for j in range(N)] for i, e in enumerate(normals)]
    red = _integer_echelon(aug, n)
    kern = [tuple(row[n:]) for row in red if all(x == 0 for x in row[:n])]
    return hermite_normal_form(kern)


def _integer_echelon(m: list[list[int]], ncols: int) -> list[list[int]]:
    # unimodular row operations clearing the first ncols columns
    m = [list(r) for r in m]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if len(nz) == 0:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            if len(nz) == 1:
                break
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    f = m[i][c] // m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        if r < len(m) and m[r][c] != 0:
            r += 1
    return m


def dual_basis(vectors: Sequence[Sequence[int]]) -> list[tuple]:
    """Return w_j with <vectors[i], w_j> = delta_ij.

    Raises NotUnimodular unless the vectors form a Z-basis.
    """
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise NotUnimodular(f"expected {n} vectors of length {n}")
    d = det(vectors)
    if abs(d) != 1:
        raise NotUnimodular(f"determinant {d} is not a unit")
    inv = inverse(vectors)  # V @ inv = I, so the columns of inv are the duals
    return [tuple(int(inv[i][j]) for i in range(n)) for j in range(n)]


@dataclass(frozen=True)
class Cone:
    """Simplicial cone spanned by the normals indexed by ``generator_indices``."""

    generator_indices: tuple
    generators: tuple
    smooth: bool = False

    @property
    def dim(self) -> int:
        return len(self.generator_indices)

    @classmethod
    def from_normals(cls, indices, normals) -> "Cone":
        idx = tuple(sorted(indices))
        gens = tuple(tuple(normals[i]) for i in idx)
        if gens and rank(gens) < len(gens):
            raise ValueError(f"cone generators {idx} are linearly dependent")
        return cls(idx, gens, _extends_to_basis(gens))


def _extends_to_basis(gens) -> bool:
    # independent vectors extend to a Z-basis iff the gcd of their maximal
    # minors is 1
    if not gens:
        return True
    n, k = len(gens[0]), len(gens)
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, int(det([[gens[i][c] for c in cols] for i in range(k)])))
        if g == 1:
            return True
    return False


def solve_in_cone(v: Sequence[int], fan: Sequence[Cone]) -> tuple[tuple, tuple]:
    """Locate ``v`` in the fan: (indices J of the minimal cone, positive coefficients).

    Cones are scanned by increasing dimension, so the first cone expressing v
    with strictly positive coefficients is the minimal one.
    """
    v = tuple(v)
    if all(x == 0 for x in v):
        return (), ()
    for cone in sorted(fan, key=lambda c: (c.dim, c.generator_indices)):
        if cone.dim == 0:
            continue
        sol = solve_combination(cone.generators, v)
        if sol is None or any(c <= 0 for c in sol):
            continue
        if any(c.denominator != 1 for c in sol):
            raise NotUnimodular(f"{v} has fractional coordinates in cone {cone.generator_indices}")
        return cone.generator_indices, tuple(int(c) for c in sol)
    raise NotInSupport(f"{v} lies in no cone of the fan")
