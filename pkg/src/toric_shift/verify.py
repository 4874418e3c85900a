"""Aggregate verification report for one polytope.

Runs the reduction property suites on seeded random homogeneous pairs, the
Leibniz and twist laws, the flatness suites, path independence of the shift
classes, positivity of the quantum corrections, homogeneity, the
neighbouring-variable recursion cross-check and, for line bundles, the
sequence-map determinants.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .connalg import (
    CheckResult,
    available_shifts,
    coefficient_monomials,
    flatness_on_generators,
)
from .eqring import EqPoly, EqRing, grade
from .operators import (
    connection_apply,
    determinant,
    inverted_facet,
    seidel_sequence_matrix,
    shift_operator,
    twist,
)
from .polytope import Kind, PolytopeSpec, build_face_lattice, shift_class_all_paths
from .presentation import Presentation

DEFAULT_PAIRS = 500


@dataclass
class VerificationReport:
    spec: PolytopeSpec
    vertex: str
    checks: list
    determinants: list = field(default_factory=list)  # (r, EqPoly)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def pretty(self) -> str:
        lines = [f"verification for {self.spec} at {self.vertex}"]
        for c in self.checks:
            lines.append(c.line())
            for f in c.failures:
                lines.append(f"    {f}")
        for r, d in self.determinants:
            lines.append(f"d_{r} = {d}")
        lines.append("ALL PASS" if self.passed else "FAILURES PRESENT")
        return "\n".join(lines)

    def to_document(self) -> dict:
        return {
            "spec": str(self.spec),
            "vertex": self.vertex,
            "passed": self.passed,
            "checks": [c.to_document() for c in self.checks],
            "determinants": [{"r": r, "det": str(d)} for r, d in self.determinants],
        }


# ---------------------------------------------------------------------------
# random homogeneous elements
# ---------------------------------------------------------------------------

def random_homogeneous(ring: EqRing, rng: random.Random, degree: int, terms: int = 3) -> EqPoly:
    """Random integer combination of monomials of one even degree."""
    out = ring.zero
    slots = [ring.U] + [ring.Y0 + k for k in range(ring.n)] + [ring.X0 + i for i in range(ring.N)]
    for _ in range(terms):
        for _attempt in range(20):
            qc = [rng.randint(-1, 1) for _ in range(ring.rank)]
            rest = degree // 2 - sum(c * h for c, h in zip(qc, ring.qchern))
            if rest >= 0:
                break
        else:
            qc, rest = [0] * ring.rank, degree // 2
        key = qc + [0] * (ring.width - ring.rank)
        for _ in range(rest):
            key[rng.choice(slots)] += 1
        out = out + ring.monomial(tuple(key), rng.choice([-3, -2, -1, 1, 2, 3]))
    return out


def reduction_suites(pres: Presentation, pairs: int = DEFAULT_PAIRS, seed: int = 0) -> list[CheckResult]:
    ring = pres.ring
    rng = random.Random(seed)
    idem = CheckResult("reduction idempotence")
    compat = CheckResult("reduction ring-compatibility")
    degree = CheckResult("reduction preserves degree")
    for _ in range(pairs):
        a = random_homogeneous(ring, rng, 2 * rng.randint(0, 3))
        b = random_homogeneous(ring, rng, 2 * rng.randint(0, 3))
        ra, rb = pres.reduce(a), pres.reduce(b)
        for e, r in ((a, ra), (b, rb)):
            rr = pres.reduce(r)
            idem.record(rr == r, lambda: f"{e}: {r} then {rr}")
            ok = not r or not e or grade(r) == grade(e)
            degree.record(ok, lambda: f"{e}: grade {grade(e)} -> {grade(r)}")
        lhs = pres.reduce(a * b)
        rhs = pres.reduce(ra * rb)
        compat.record(lhs == rhs, lambda: f"a={a}, b={b}: {lhs} vs {rhs}")
    return [idem, compat, degree]


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------

def leibniz_suite(pres: Presentation, coeffs) -> CheckResult:
    ring = pres.ring
    res = CheckResult("Leibniz rule for nabla_j")
    for j in pres.free:
        for f in coeffs:
            df = pres.differentiate(j, f)
            for b in pres.basis:
                lhs = connection_apply(j, f * b, pres)
                rhs = pres.reduce(f * connection_apply(j, b, pres) + ring.u0() * df * b)
                res.record(lhs == rhs, lambda: f"j={j}, f={f}, b={b}: {lhs - rhs}")
    return res


def twist_suite(pres: Presentation, shifts: dict, coeffs) -> CheckResult:
    res = CheckResult("twist law S_i(f b) = E_i(f) S_i(b)")
    for i, S in shifts.items():
        for f in coeffs:
            tf = twist(f, S.twist)
            for b in pres.basis:
                lhs = S(f * b)
                rhs = pres.reduce(tf * S(b))
                res.record(lhs == rhs, lambda: f"i={i}, f={f}, b={b}: {lhs - rhs}")
    return res


def neighbour_recursion_suite(pres: Presentation, shifts: dict) -> CheckResult:
    """S(x_i p) via the linear relation for neighbouring i equals S applied directly."""
    ring = pres.ring
    spec = pres.spec
    res = CheckResult("neighbouring-variable recursion agrees")
    for s, S in shifts.items():
        for i in pres.neighbours:
            w = pres.duals[i]
            for p in pres.basis:
                direct = S(ring.x(i) * p)
                via = ring.zero
                for l in pres.free:
                    c = sum(a * b for a, b in zip(spec.normals[l], w))
                    if c:
                        via = via - S(ring.x(l) * p) * c
                for k, wk in enumerate(w):
                    if wk:
                        via = via - twist(ring.y(k + 1), S.twist) * S(p) * wk
                via = pres.reduce(via)
                res.record(direct == via, lambda: f"S{s}, x{i}*{p}: {direct} vs {via}")
    return res


def homogeneity_suite(pres: Presentation, shifts: dict) -> CheckResult:
    res = CheckResult("homogeneity of S_i and nabla_j")
    degs = [grade(b) for b in pres.basis]
    for i, S in shifts.items():
        for r, row in enumerate(S.matrix):
            for c, a in enumerate(row):
                if not a:
                    continue
                want = S.degree + degs[c] - degs[r]
                res.record(grade(a) == want, lambda: f"S{i} entry ({r},{c}) = {a}: grade {grade(a)}, want {want}")
    for j in pres.free:
        for b, d in zip(pres.basis, degs):
            out = connection_apply(j, b, pres)
            res.record(not out or grade(out) == d + 2, lambda: f"nabla_{j}({b}) = {out}")
    return res


def path_independence_suite(spec: PolytopeSpec) -> CheckResult:
    lat = build_face_lattice(spec)
    res = CheckResult("shift-class path independence")
    for v in lat.vertices:
        for i in range(spec.N):
            classes = {d.vector for d in shift_class_all_paths(spec, v.id, i)}
            if not classes:
                continue  # unreachable facet, reported as NoPath elsewhere
            res.record(len(classes) == 1, lambda: f"{v.name}, F{i}: {sorted(classes)}")
    return res


def positivity_suite(pres: Presentation) -> CheckResult:
    res = CheckResult("d_I energy and c_1 positivity")
    offsets = pres.spec.offsets
    for rel in pres.relations:
        e, c = rel.exponent.energy(offsets), rel.exponent.chern
        res.record(e > 0 and c > 0, lambda: f"I={list(rel.primitive_set)}: energy {e}, c_1 {c}")
    res.note = ", ".join(
        f"I={list(r.primitive_set)}: energy {r.exponent.energy(offsets)}" for r in pres.relations
    )
    return res


def quantum_limit_suite(pres: Presentation) -> CheckResult:
    res = CheckResult("classical limit rank equals vertex count")
    n = len(pres.lattice.vertices)
    res.record(pres.classical_rank == n, lambda: f"rank {pres.classical_rank} vs {n} vertices")
    return res


def run_verification(
    spec: PolytopeSpec,
    vertex=0,
    max_degree: int = 6,
    pairs: int = DEFAULT_PAIRS,
    seed: int = 0,
    broken_connection: bool = False,
    drop_u0_correction: bool = False,
    determinant_range: range = range(1, 4),
    pres: Optional[Presentation] = None,
) -> VerificationReport:
    pres = pres or Presentation(spec, vertex)
    coeffs = coefficient_monomials(pres.ring, max_degree)
    shifts = {
        i: shift_operator(i, pres, drop_u0_correction=drop_u0_correction)
        for i in available_shifts(pres)
    }
    checks = []
    checks += reduction_suites(pres, pairs, seed)
    checks.append(quantum_limit_suite(pres))
    checks.append(leibniz_suite(pres, coeffs))
    checks.append(twist_suite(pres, shifts, coeffs))
    flat = flatness_on_generators(
        pres, max_degree, broken_connection=broken_connection, shifts=shifts
    )
    checks += flat.checks
    checks.append(neighbour_recursion_suite(pres, shifts))
    checks.append(homogeneity_suite(pres, shifts))
    checks.append(path_independence_suite(spec))
    checks.append(positivity_suite(pres))
    dets = []
    fibre = inverted_facet(pres)
    if spec.kind is Kind.LINE_BUNDLE and fibre is not None:
        for r in determinant_range:
            dets.append((r, determinant(seidel_sequence_matrix(fibre, r, pres))))
    return VerificationReport(spec, pres.vertex.name, checks, dets)
