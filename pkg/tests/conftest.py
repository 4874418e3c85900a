import pathlib

import pytest

from toric_shift.polytope import PolytopeSpec, lift_line_bundle
from toric_shift.presentation import Presentation

DATA = pathlib.Path(__file__).parent / "data"

# criterion id -> (passed, description); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def make_p1():
    return PolytopeSpec(1, ((-1,), (1,)), (-1, 0), name="P1")


def make_p2():
    return PolytopeSpec(2, ((-1, -1), (1, 0), (0, 1)), (-1, 0, 0), name="P2")


def make_p1xp1():
    return PolytopeSpec(2, ((-1, 0), (0, -1), (1, 0), (0, 1)), (-1, -1, 0, 0), name="P1xP1")


def make_o1():
    return lift_line_bundle(make_p1(), (0, -1))


@pytest.fixture(scope="session")
def p1():
    return make_p1()


@pytest.fixture(scope="session")
def p2():
    return make_p2()


@pytest.fixture(scope="session")
def p1xp1():
    return make_p1xp1()


@pytest.fixture(scope="session")
def o1():
    return make_o1()


@pytest.fixture(scope="session")
def P2(p2):
    return Presentation(p2, 0)


@pytest.fixture(scope="session")
def O1(o1):
    return Presentation(o1, 0)


@pytest.fixture(scope="session")
def P1(p1):
    return Presentation(p1, 0)


@pytest.fixture(scope="session")
def P11(p1xp1):
    return Presentation(p1xp1, 0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
