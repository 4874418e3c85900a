from fractions import Fraction
from itertools import combinations, product

import pytest

from toric_shift.errors import (
    EmptyPolytope,
    InvalidSpec,
    NotMonotone,
    NotSmooth,
    UnboundedEdge,
)
from toric_shift.lattice import solve_in_cone
from toric_shift.polytope import (
    Kind,
    NovikovExponent,
    PolytopeSpec,
    build_face_lattice,
    check_monotone,
    lift_line_bundle,
    primitive_sets,
    shift_class,
    shift_class_all_paths,
    spec_from_document,
    spec_to_document,
    wall_curve_class,
)


def test_p2_vertices(p2):
    lat = build_face_lattice(p2)
    assert [v.coords for v in lat.vertices] == [(0, 0), (1, 0), (0, 1)]
    assert [v.facets for v in lat.vertices] == [(1, 2), (0, 2), (0, 1)]
    assert not lat.rays


def test_o1_vertices_edges(o1):
    lat = build_face_lattice(o1)
    assert [v.coords for v in lat.vertices] == [(0, 0), (1, 0)]
    assert [e.facets for e in lat.bounded_edges] == [(2,)]
    assert len(lat.rays) == 2


def test_p1_vertices(p1):
    lat = build_face_lattice(p1)
    assert [v.coords for v in lat.vertices] == [(0,), (1,)]
    # v0 lies on F1, v1 on F0
    assert [v.facets for v in lat.vertices] == [(1,), (0,)]


def test_vertex_lookup(p2):
    lat = build_face_lattice(p2)
    assert lat.vertex("v1") is lat.vertex(1) is lat.vertex((2, 0))
    with pytest.raises(KeyError):
        lat.vertex("v9")


def test_primitive_sets(p2, o1, p1xp1):
    assert primitive_sets(p2) == [(0, 1, 2)]
    assert primitive_sets(o1) == [(0, 1)]
    assert primitive_sets(p1xp1) == [(0, 2), (1, 3)]


def test_primitive_sets_exhaustive_oracle(p1xp1):
    cones = build_face_lattice(p1xp1).cone_sets
    subsets = [I for s in range(1, 5) for I in combinations(range(4), s)]
    noncones = [I for I in subsets if I not in cones]
    minimal = [I for I in noncones if not any(set(J) < set(I) for J in noncones)]
    assert primitive_sets(p1xp1) == minimal


def test_wall_curve_classes(p2, o1, p1):
    for e in build_face_lattice(p2).bounded_edges:
        assert wall_curve_class(e, p2).vector == (1, 1, 1)
    (e,) = build_face_lattice(o1).bounded_edges
    A = wall_curve_class(e, o1)
    assert A.vector == (1, 1, -1)
    assert A.in_kernel(o1.normals)
    (e,) = build_face_lattice(p1).bounded_edges
    assert wall_curve_class(e, p1).vector == (1, 1)
    with pytest.raises(UnboundedEdge):
        wall_curve_class(build_face_lattice(o1).rays[0], o1)


def test_shift_classes(p2, o1, p1):
    assert shift_class(p2, 0, 0).vector == (-1, -1, -1)
    assert shift_class(p2, 0, 1).vector == (0, 0, 0)
    assert shift_class(p2, 0, 2).vector == (0, 0, 0)
    assert shift_class(o1, 0, 0).vector == (-1, -1, 1)
    assert shift_class(p1, 0, 0).vector == (-1, -1)


@pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "o1"])
def test_shift_class_path_independent(name, request):
    p = request.getfixturevalue(name)
    for v in build_face_lattice(p).vertices:
        for i in range(p.N):
            classes = {d.vector for d in shift_class_all_paths(p, v.id, i)}
            assert len(classes) == 1
            assert next(iter(classes)) == shift_class(p, v.id, i).vector


def test_monotonicity(p2, o1, p1, p1xp1):
    assert check_monotone(p2) == 3
    assert check_monotone(o1) == 1
    assert check_monotone(p1) == 2
    assert check_monotone(p1xp1) == 2


def test_lift_line_bundle(p1):
    E = lift_line_bundle(p1, (0, -1))
    assert E.normals == ((-1, 0), (1, 1), (0, 1))
    assert E.offsets == (-1, 0, 0)
    assert E.kind is Kind.LINE_BUNDLE
    with pytest.raises(NotMonotone, match="k = 0"):
        lift_line_bundle(p1, (0, 0))
    with pytest.raises(NotMonotone, match="k = 2"):
        lift_line_bundle(p1, (0, -2))


def test_lift_over_p2(p2):
    E = lift_line_bundle(p2, (0, 0, -1))
    assert check_monotone(E) == 2
    assert primitive_sets(E) == [(0, 1, 2)]


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        PolytopeSpec(2, ((2, 0), (0, 1), (-1, -1)), (0, 0, -1))
    with pytest.raises(InvalidSpec):
        PolytopeSpec(1, ((1,), (1,)), (0, 1))
    with pytest.raises(InvalidSpec):
        PolytopeSpec(1, ((1,),), (0, 1))
    with pytest.raises(EmptyPolytope):
        build_face_lattice(PolytopeSpec(1, ((1,), (-1,)), (1, 0)))
    with pytest.raises(InvalidSpec):
        build_face_lattice(PolytopeSpec(1, ((1,),), (0,)))  # declared closed, unbounded
    with pytest.raises(NotSmooth):
        # weighted projective plane: vertex normals (1,0),(-1,-2) have det -2
        build_face_lattice(PolytopeSpec(2, ((1, 0), (0, 1), (-1, -2)), (0, 0, -2)))


def test_rational_offsets():
    p = PolytopeSpec(2, ((-1, -1), (1, 0), (0, 1)), ("-1/2", 0, 0))
    assert p.offsets[0] == Fraction(-1, 2)
    lat = build_face_lattice(p)
    assert lat.vertices[1].coords == (Fraction(1, 2), 0)
    assert check_monotone(p) == 6


def test_document_round_trip(o1):
    doc = spec_to_document(o1)
    again = spec_from_document(doc)
    assert again.normals == o1.normals and again.offsets == o1.offsets and again.kind is o1.kind
    lifted = spec_from_document(
        {"n": 1, "normals": [[-1], [1]], "offsets": ["-1", 0], "line_bundle": {"m": [0, -1]}}
    )
    assert lifted.normals == o1.normals


def test_completeness_of_closed_fans(p2, p1xp1):
    for p in (p2, p1xp1):
        fan = build_face_lattice(p).fan
        for v in product(range(-3, 4), repeat=2):
            J, c = solve_in_cone(v, fan)
            assert all(x >= 1 for x in c)


def test_novikov_exponent_arithmetic():
    A = NovikovExponent((1, 1, 1))
    B = NovikovExponent((0, 1, -1))
    assert (A + B).vector == (1, 2, 0)
    assert (A - B).vector == (1, 0, 2)
    assert (3 * A).degree == 18
    assert A.energy((-1, 0, 0)) == 1
    assert A.pair((1, 0, 0)) == 1
