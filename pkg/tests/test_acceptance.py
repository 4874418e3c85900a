"""Acceptance gate: one test per criterion, each printed as PASS/FAIL.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""
import contextlib
import time

import pytest

from conftest import ACCEPTANCE, make_o1, make_p1, make_p1xp1, make_p2
from toric_shift.connalg import flatness_on_generators
from toric_shift.operators import (
    Connection,
    determinant,
    operator_apply,
    seidel_sequence_matrix,
    sh_presentation,
    sh_rank_nonequivariant,
    shift_operator,
)
from toric_shift.presentation import Presentation, canonical_reduce, single_variable_presentation
from toric_shift.verify import run_verification


@contextlib.contextmanager
def criterion(key, text):
    ACCEPTANCE[key] = (False, text)
    yield
    ACCEPTANCE[key] = (True, text)


def test_criterion_1_p2_presentation():
    with criterion(1, "P2 presentation: x0x1x2 - q -> 0, rank 3, Λ[x]/(x^3 - q)"):
        pres = Presentation(make_p2(), 0)
        R = pres.ring
        assert canonical_reduce(R.parse("x0*x1*x2 - q"), pres) == R.zero
        assert pres.classical_rank == 3 and len(pres.basis) == 3
        assert single_variable_presentation(pres) == "Λ[x]/(x^3 - q)"


P2_TABLE = [
    ("1", "x1"),
    ("x0", "x0*x1"),
    ("x1", "x1*(x1 - u0)"),
    ("x2", "x1*x2"),
    ("x0^2", "x0^2*x1"),
    ("x1^2", "x1*(x1 - u0)^2"),
    ("x0*x1", "x0*x1*(x1 - u0)"),
    ("x1*x2", "x1*(x1 - u0)*x2"),
    ("x0*x2", "x0*x1*x2"),
    ("x2^2", "x1*x2^2"),
]


def test_criterion_2_p2_shift_table():
    with criterion(2, "P2 shift table: S1 at v0 on 1, x0, x1, x2 and all degree-4 monomials"):
        pres = Presentation(make_p2(), 0)
        R = pres.ring
        S = shift_operator(1, pres)
        for arg, want in P2_TABLE:
            assert operator_apply(S, R.parse(arg)) == canonical_reduce(R.parse(want), pres), arg


def test_criterion_3_p2_flatness_spot_check():
    with criterion(3, "P2 spot check: S1 nabla0(x1x2) - nabla0 S1(x1x2) = 0, q term kept"):
        pres = Presentation(make_p2(), 0)
        R = pres.ring
        S, nabla = shift_operator(1, pres), Connection(pres, 0)
        e = R.parse("x1*x2")
        assert S(nabla(e)) - nabla(S(e)) == R.zero
        # differentiating x1*(x1 - u0)*x2 as written finds no q and loses u0*q
        naive = pres.reduce(R.x(0) * R.parse("x1*(x1 - u0)*x2"))
        assert S(nabla(e)) - naive == R.parse("u0*q")


def test_criterion_4_line_bundle():
    with criterion(4, "O(-1): relation, S2 values, sequence matrices r=1..3, d_r for r=1..5"):
        pres = Presentation(make_o1(), 0)
        R = pres.ring
        (rel,) = pres.relations
        assert rel.relation == R.parse("x0*x1 - q*x2")
        S = shift_operator(2, pres)
        for arg, want in [("1", "x2"), ("x0", "x0*x2"), ("x1", "x1*x2"), ("x2", "(x2 - u0)*x2")]:
            assert S(R.parse(arg)) == pres.reduce(R.parse(want)), arg
        bs = pres.validate_basis([R.one, R.x(2)])
        for r in range(1, 6):
            op = seidel_sequence_matrix(2, r, pres, bs)
            if r <= 3:
                a = R.parse(f"(y2 - {r}*u0)*({r}*u0 + y1 - y2)")
                b = R.parse(f"q + y1 - 2*y2 + {2 * r - 1}*u0")
                assert op.matrix == [[R.zero, a], [R.one, b]], r
            want = R.parse(f"(y2 - {r}*u0)*(y2 - y1 - {r}*u0)")
            assert determinant(op) in (want, -want), r


def test_criterion_5_sh():
    with criterion(5, "SH of O(-1): localized presentation text and rank 1"):
        pres = Presentation(make_o1(), 0)
        text = sh_presentation(pres)
        assert text.replace("−", "-") == "Λ[x0,x1,x2^±1] / (x1-x0, x1+x2, x0*x1 - q*x2)"
        R = pres.ring
        M = shift_operator(2, pres, pres.validate_basis([R.one, R.x(2)])).specialize()
        # M = [[0, 0], [1, q]]: M^2 = [[0, 0], [q, q^2]] has a one-dimensional kernel
        assert M == [[R.zero, R.zero], [R.one, R.q(1)]]
        assert sh_rank_nonequivariant(pres) == 1


MANIFOLDS = {"P1": make_p1, "P2": make_p2, "P1xP1": make_p1xp1, "O(-1)": make_o1}


def test_criterion_6_property_suites():
    with criterion(6, "verify on P1, P2, P1xP1, O(-1): 500 pairs each, zero failures, < 5 s each"):
        for name, make in MANIFOLDS.items():
            start = time.perf_counter()
            rep = run_verification(make(), 0, pairs=500)
            elapsed = time.perf_counter() - start
            assert rep.passed, (name, [c.line() for c in rep.checks if not c.passed])
            assert elapsed < 5.0, (name, elapsed)
            assert rep.check("reduction ring-compatibility").count == 500
            for suite in ("reduction idempotence", "Leibniz rule for nabla_j",
                          "twist law S_i(f b) = E_i(f) S_i(b)",
                          "difference flatness [S_i, S_i'] = 0", "mixed flatness [S_i, nabla_j] = 0",
                          "shift-class path independence", "d_I energy and c_1 positivity"):
                assert rep.check(suite).count > 0, (name, suite)


def test_criterion_7_negative_controls():
    with criterion(7, "negative controls: broken nabla or dropped u0 correction fail flatness"):
        for name, make in MANIFOLDS.items():
            pres = Presentation(make(), 0)
            assert not flatness_on_generators(pres, broken_connection=True).passed, name
            assert not flatness_on_generators(pres, drop_u0_correction=True).passed, name


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
