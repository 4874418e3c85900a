"""Exact equivariant quantum cohomology of monotone toric manifolds.

From moment-polytope data this package builds quantum Stanley-Reisner
presentations, canonical normal forms, the connection nabla, shift operators,
their matrices and determinants, and symplectic cohomology presentations
for negative line bundles.
"""
from .eqring import INHOMOGENEOUS, EqPoly, EqRing, format_poly, grade, parse
from .errors import ToricError
from .operators import (
    SemilinearOperator,
    connection_apply,
    determinant,
    operator_apply,
    operator_compose,
    seidel_sequence_matrix,
    sh_presentation,
    sh_rank_nonequivariant,
    shift_operator,
    twisted_pullback,
)
from .polytope import (
    Kind,
    NovikovExponent,
    PolytopeSpec,
    build_face_lattice,
    check_monotone,
    lift_line_bundle,
    primitive_sets,
    shift_class,
    wall_curve_class,
)
from .presentation import (
    BasisSpec,
    Presentation,
    build_presentation,
    canonical_reduce,
    differentiate,
    validate_basis,
)

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "EqPoly",
    "EqRing",
    "INHOMOGENEOUS",
    "Kind",
    "NovikovExponent",
    "PolytopeSpec",
    "Presentation",
    "SemilinearOperator",
    "ToricError",
    "build_face_lattice",
    "build_presentation",
    "canonical_reduce",
    "check_monotone",
    "connection_apply",
    "determinant",
    "differentiate",
    "format_poly",
    "grade",
    "lift_line_bundle",
    "operator_apply",
    "operator_compose",
    "parse",
    "primitive_sets",
    "seidel_sequence_matrix",
    "sh_presentation",
    "sh_rank_nonequivariant",
    "shift_class",
    "shift_operator",
    "twisted_pullback",
    "validate_basis",
    "wall_curve_class",
]
