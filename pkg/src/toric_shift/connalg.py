"""Connections as algebraic structure: executable axiom checks.

Everything here evaluates identities on explicitly enumerated finite samples
and reports exact deviations.  The toric instance supplies the vector fields
u0 * d/dx_j (j not a neighbour of the vertex), the algebra shifts E_sigma of
the facet cocharacters and the module operators nabla_j, S_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Optional, Sequence

from .eqring import EqPoly, EqRing
from .errors import NoPath
from .operators import (
    Connection,
    SemilinearOperator,
    operator_compose,
    shift_operator,
    twist,
)
from .presentation import Presentation

MAX_REPORTED = 5


@dataclass
class CheckResult:
    """Outcome of one identity over a finite sample."""

    name: str
    count: int = 0
    failures: list = field(default_factory=list)
    failed: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, detail: Callable[[], str]):
        self.count += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(detail())

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{status} {self.name}: {self.count - self.failed}/{self.count}{extra}"

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "count": self.count,
            "failed": self.failed,
            "failures": list(self.failures),
            "note": self.note,
        }


@dataclass
class FlatnessReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)


# ---------------------------------------------------------------------------
# derivations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivationSpec:
    """An operation claimed to satisfy X(ab) = (Xa)b + a(Xb)."""

    label: str
    op: Callable[[EqPoly], EqPoly]

    def __call__(self, f: EqPoly) -> EqPoly:
        return self.op(f)

    def leibniz(self, samples: Sequence[EqPoly]) -> CheckResult:
        res = CheckResult(f"Leibniz for {self.label}")
        for a, b in product(samples, repeat=2):
            dev = self.op(a * b) - (self.op(a) * b + a * self.op(b))
            res.record(not dev, lambda: f"a={a}, b={b}: deviation {dev}")
        return res


def q_derivative(pres: Presentation, j: int) -> Callable[[EqPoly], EqPoly]:
    """d/dx_j on coefficients: q^A -> A_j q^A."""
    pres.alpha_vector(j)
    return lambda f: pres.differentiate(j, f)


def vector_field(pres: Presentation, j: int, scale: Optional[EqPoly] = None) -> DerivationSpec:
    """u0 * d/dx_j, or ``scale`` * d/dx_j."""
    d = q_derivative(pres, j)
    s = pres.ring.u0() if scale is None else scale
    label = f"u0*d/dx{j}" if scale is None else f"({scale})*d/dx{j}"
    return DerivationSpec(label, lambda f: s * d(f))


def zero_field(ring: EqRing) -> DerivationSpec:
    return DerivationSpec("0", lambda f: ring.zero)


def canonical_connection(X: DerivationSpec) -> Callable[[EqPoly], EqPoly]:
    """nabla_X(a) = X a on the free rank-one module over the coefficients."""
    return X.op


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def curvature_differential(
    nabla_X: Callable, nabla_Y: Callable, samples: Iterable[EqPoly],
    nabla_bracket: Optional[Callable] = None,
) -> list[tuple]:
    """Nonzero values of nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]."""
    out = []
    for s in samples:
        val = nabla_X(nabla_Y(s)) - nabla_Y(nabla_X(s))
        if nabla_bracket is not None:
            val = val - nabla_bracket(s)
        if val:
            out.append((s, val))
    return out


def curvature_difference(S_sigma: Callable, S_tau: Callable, samples: Iterable[EqPoly]) -> list[tuple]:
    """Nonzero values of S_sigma S_tau - S_tau S_sigma."""
    out = []
    for s in samples:
        val = S_sigma(S_tau(s)) - S_tau(S_sigma(s))
        if val:
            out.append((s, val))
    return out


def curvature_twist_relation(
    S_sigma: SemilinearOperator, S_tau: SemilinearOperator,
    coeffs: Sequence[EqPoly], samples: Sequence[EqPoly],
) -> CheckResult:
    """R(a p) = E_sigma E_tau(a) R(p) for the difference curvature R."""
    pres = S_sigma.pres
    res = CheckResult(f"curvature twist relation {S_sigma.label}, {S_tau.label}")
    total = tuple(a + b for a, b in zip(S_sigma.twist, S_tau.twist))

    def R(p):
        return S_sigma(S_tau(p)) - S_tau(S_sigma(p))

    for a in coeffs:
        ta = twist(a, total)
        for p in samples:
            dev = R(pres.reduce(a * p)) - pres.reduce(ta * R(p))
            res.record(not dev, lambda: f"a={a}, p={p}: deviation {dev}")
    return res


def check_mixed_commutation(
    X: DerivationSpec, sigma: Sequence[int], samples: Sequence[EqPoly]
) -> CheckResult:
    """[X, E_sigma] = 0 on the coefficient samples."""
    res = CheckResult(f"[{X.label}, E{list(sigma)}] = 0")
    for f in samples:
        dev = X(twist(f, sigma)) - twist(X(f), sigma)
        res.record(not dev, lambda: f"f={f}: deviation {dev}")
    return res


# ---------------------------------------------------------------------------
# samples
# ---------------------------------------------------------------------------

def coefficient_generators(ring: EqRing) -> list[EqPoly]:
    """q^{K} for each H_2 basis vector K, then u0, y_1..y_n."""
    gens = [ring.q(tuple(int(r == s) for s in range(ring.rank))) for r in range(ring.rank)]
    return gens + [ring.u0()] + [ring.y(k) for k in range(1, ring.n + 1)]


def coefficient_monomials(ring: EqRing, max_degree: int = 6) -> list[EqPoly]:
    """Products of the generators of total weight <= max_degree.

    u0 and y_k weigh 2; q^K weighs |2 c_1(K)| (at least 2).
    """
    gens = coefficient_generators(ring)
    weights = [max(2, abs(ring.degree(next(iter(g.terms))))) for g in gens]
    out = []

    def grow(start, acc, w):
        out.append(acc)
        for k in range(start, len(gens)):
            if w + weights[k] <= max_degree:
                grow(k, acc * gens[k], w + weights[k])

    grow(0, ring.one, 0)
    return sorted(out, key=lambda p: ring.sort_key(next(iter(p.terms))))


# ---------------------------------------------------------------------------
# flatness on generators
# ---------------------------------------------------------------------------

def available_shifts(pres: Presentation) -> list[int]:
    out = []
    for i in range(pres.spec.N):
        try:
            pres.shift_class(i)
        except NoPath:
            continue
        out.append(i)
    return out


def flatness_on_generators(
    pres: Presentation,
    max_degree: int = 6,
    broken_connection: bool = False,
    drop_u0_correction: bool = False,
    shifts: Optional[dict] = None,
) -> FlatnessReport:
    """Pairwise flatness on the module basis for the generating directions.

    Also certifies the hypotheses that make generator checks sufficient:
    the vector fields commute with the algebra shifts, and each algebra
    shift is injective (it has the inverse E_{-sigma}).
    """
    ring = pres.ring
    basis = list(pres.basis)
    free = list(pres.free)
    facets = available_shifts(pres)
    nablas = {j: Connection(pres, j, broken_connection) for j in free}
    if shifts is None:
        shifts = {i: shift_operator(i, pres, drop_u0_correction=drop_u0_correction) for i in facets}
    coeffs = coefficient_monomials(ring, max_degree)
    checks = []

    res = CheckResult("differential flatness [nabla_j, nabla_j'] = 0")
    for j, k in combinations(free, 2):
        for b, dev in _deviations(curvature_differential(nablas[j], nablas[k], basis), basis):
            res.record(dev is None, lambda: f"j={j}, j'={k}, b={b}: {dev}")
    if len(free) < 2:
        res.note = "a single direction; nothing to compare"
    checks.append(res)

    res = CheckResult("difference flatness [S_i, S_i'] = 0")
    for i, k in combinations(facets, 2):
        a = operator_compose(shifts[i], shifts[k]).matrix
        c = operator_compose(shifts[k], shifts[i]).matrix
        for r, (ra, rc) in enumerate(zip(a, c)):
            for col, (ea, ec) in enumerate(zip(ra, rc)):
                res.record(ea == ec, lambda: f"i={i}, i'={k}, entry ({r},{col}): {ea} vs {ec}")
    checks.append(res)

    res = CheckResult("mixed flatness [S_i, nabla_j] = 0")
    for i in facets:
        for j in free:
            for b in basis:
                lhs = shifts[i](nablas[j](b))
                rhs = nablas[j](shifts[i](b))
                res.record(lhs == rhs, lambda: f"i={i}, j={j}, b={b}: {lhs - rhs}")
    checks.append(res)

    res = CheckResult("vector fields commute with algebra shifts")
    for j in free:
        X = vector_field(pres, j)
        for i in facets:
            sub = check_mixed_commutation(X, pres.spec.normals[i], coeffs)
            res.count += sub.count
            res.failed += sub.failed
            res.failures.extend(sub.failures[: MAX_REPORTED - len(res.failures)])
    checks.append(res)

    res = CheckResult("algebra shifts injective (E_-sigma E_sigma = id)")
    for i in facets:
        sigma = pres.spec.normals[i]
        for f in coeffs:
            back = twist(twist(f, sigma), [-s for s in sigma])
            res.record(back == f, lambda: f"i={i}, f={f}: {back}")
    checks.append(res)
    return FlatnessReport(checks)


def _deviations(devs, samples):
    bad = dict((s, v) for s, v in devs)
    for s in samples:
        yield s, bad.get(s)
