from fractions import Fraction
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_shift.errors import NormalsDoNotSpan, NotInSupport, NotUnimodular
from toric_shift.lattice import (
    Cone,
    combination,
    det,
    dual_basis,
    hermite_normal_form,
    kernel_basis,
    pairing,
    rank,
    solve_combination,
    solve_in_cone,
)
from toric_shift.polytope import build_face_lattice


def brute_kernel(normals, box=2):
    """All nonzero A in [-box, box]^N with sum A_i e_i = 0."""
    n = len(normals[0])
    out = []
    for A in product(range(-box, box + 1), repeat=len(normals)):
        if any(A) and combination(A, normals) == (0,) * n:
            out.append(A)
    return out


def in_lattice(v, basis):
    if not basis:
        return not any(v)
    sol = solve_combination(basis, v)
    return sol is not None and all(c.denominator == 1 for c in sol)


def minor_gcd(rows, r):
    if r == 0:
        return 0
    g = 0
    for R in combinations(range(len(rows)), r):
        for C in combinations(range(len(rows[0])), r):
            g = gcd(g, int(det([[rows[i][j] for j in C] for i in R])))
    return g


def is_hermite(rows):
    pivots = []
    for r in rows:
        p = next(i for i, x in enumerate(r) if x)
        if r[p] <= 0:
            return False
        pivots.append(p)
    if pivots != sorted(set(pivots)):
        return False
    for k, (r, p) in enumerate(zip(rows, pivots)):
        for above in rows[:k]:
            if not 0 <= above[p] < r[p]:
                return False
    return True


@pytest.mark.parametrize(
    "normals, expected",
    [
        ([(-1, -1), (1, 0), (0, 1)], [(1, 1, 1)]),
        ([(-1, 0), (1, 1), (0, 1)], [(1, 1, -1)]),
        ([(-1, 0), (0, -1), (1, 0), (0, 1)], [(1, 0, 1, 0), (0, 1, 0, 1)]),
    ],
)
def test_kernel_basis_matches_brute_force(normals, expected):
    K = kernel_basis(normals)
    assert K == expected
    # oracle: every small kernel vector lies in the span and vice versa
    brute = brute_kernel(normals)
    assert brute
    assert all(in_lattice(A, K) for A in brute)
    assert all(A in brute for A in K)
    assert is_hermite(K)


def test_kernel_basis_trivial():
    assert kernel_basis([(1, 0), (0, 1)]) == []


def test_kernel_basis_needs_spanning_normals():
    with pytest.raises(NormalsDoNotSpan):
        kernel_basis([(1, 0), (2, 0)])


def test_dual_basis_examples():
    assert dual_basis([(1, 0), (0, 1)]) == [(1, 0), (0, 1)]
    assert dual_basis([(1, 1), (0, 1)]) == [(1, 0), (-1, 1)]
    with pytest.raises(NotUnimodular):
        dual_basis([(2, 0), (0, 1)])


def test_solve_in_cone_examples(p2, o1):
    fan2 = build_face_lattice(p2).fan
    assert solve_in_cone((0, 0), fan2) == ((), ())
    assert solve_in_cone((1, 0), fan2) == ((1,), (1,))
    fan = build_face_lattice(o1).fan
    assert solve_in_cone((0, 1), fan) == ((2,), (1,))
    with pytest.raises(NotInSupport):
        solve_in_cone((0, -1), fan)


def test_cone_smoothness_flag():
    assert Cone.from_normals((0, 1), [(1, 0), (0, 1)]).smooth
    assert not Cone.from_normals((0, 1), [(1, 0), (1, 2)]).smooth
    assert Cone.from_normals((0,), [(2, 1)]).smooth


def test_rational_helpers():
    assert det([[1, 2], [3, 4]]) == -2
    assert rank([[1, 2], [2, 4]]) == 1
    assert solve_combination([[1, 0], [1, 1]], [3, 1]) == [Fraction(2), Fraction(1)]
    assert solve_combination([[1, 0]], [0, 1]) is None


small = st.integers(min_value=-4, max_value=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=3, max_size=5))
def test_kernel_vectors_annihilate(normals):
    if rank(normals) < 3:
        with pytest.raises(NormalsDoNotSpan):
            kernel_basis(normals)
        return
    K = kernel_basis(normals)
    assert len(K) == len(normals) - 3
    for A in K:
        assert combination(A, normals) == (0, 0, 0)
    assert kernel_basis(normals) == K  # deterministic


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=1, max_size=4))
def test_hermite_form_spans_same_lattice(rows):
    H = hermite_normal_form(rows)
    assert is_hermite(H)
    # H is independent, so membership in its span is decided by a unique solve
    assert all(in_lattice(r, H) for r in rows)
    # same rank and same gcd of maximal minors, hence the same lattice
    assert len(H) == rank(rows)
    assert minor_gcd(H, len(H)) == minor_gcd(rows, len(H))


@settings(max_examples=60, deadline=None)
@given(small, small, small)
def test_dual_basis_round_trip(a, b, c):
    # unimodular matrices [[1, a], [b, 1 + a b]] twisted by a shear c
    M = [(1, a), (b, 1 + a * b)]
    M = [(M[0][0] + c * M[1][0], M[0][1] + c * M[1][1]), M[1]]
    W = dual_basis(M)
    for i, v in enumerate(M):
        for j, w in enumerate(W):
            assert pairing(v, w) == (1 if i == j else 0)


@settings(max_examples=60, deadline=None)
@given(a=st.integers(-5, 5), b=st.integers(-5, 5))
def test_solve_in_cone_reassembles(p1xp1, a, b):
    fan = build_face_lattice(p1xp1).fan
    J, c = solve_in_cone((a, b), fan)
    normals = p1xp1.normals
    total = [0, 0]
    for j, cj in zip(J, c):
        assert cj >= 1
        total = [t + cj * x for t, x in zip(total, normals[j])]
    assert tuple(total) == (a, b)
