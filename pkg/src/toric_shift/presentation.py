"""Equivariant quantum cohomology presentations at a chosen vertex.

At a vertex v the neighbouring divisors x_i (i in N(v)) are eliminated with
the linear relations, leaving a polynomial ring in the remaining x_j over
Lambda[u0, y].  The quantum Stanley-Reisner relations, rewritten in these
variables, cut out a free module whose basis is chosen greedily on the
classical quotient (q = y = u0 = 0).

Normal form.  Each rewritten relation S_r splits as T_r + (lower x-degree),
where the top part T_r is an integer form in the free x's only.  A monomial
mu of x-degree k is written over Q as

    mu = sum_b c_b * b + sum g * nu * T_r        (classical quotient, degree k)

and then NF(mu) = sum_b c_b * b - NF(sum g * nu * (S_r - T_r)), which only
involves x-degree < k.  Coefficients are carried as Fractions and must come
out integral.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from operator import add
from typing import Mapping, Optional, Sequence

from . import polymatrix
from .eqring import EqPoly, EqRing
from .errors import (
    MixedContext,
    NeighbourDirection,
    NoPath,
    NotABasis,
    NotDivisible,
    NotIntegral,
    NotMonotone,
)
from .lattice import dual_basis, pairing, rank, solve_combination, solve_in_cone
from .polytope import (
    NovikovExponent,
    PolytopeSpec,
    Vertex,
    build_face_lattice,
    primitive_sets,
    shift_class,
    spec_to_document,
)


@dataclass(frozen=True)
class QSRRelation:
    """x_I - q^{d_I} x_J^c for one primitive set I."""

    primitive_set: tuple
    cone: tuple
    coefficients: tuple
    exponent: NovikovExponent
    relation: EqPoly  # in all variables
    rewritten: EqPoly  # neighbours eliminated
    top: EqPoly  # highest x-degree part of ``rewritten``
    lhs: Optional[EqPoly]  # leading monomial when it has a unit coefficient
    rhs: Optional[EqPoly]

    def rule_text(self) -> str:
        if self.lhs is None:
            return f"{self.rewritten} = 0"
        return f"{self.lhs} -> {self.rhs}"


class _DegreeTable:
    """Classical quotient in one x-degree: basis monomials and ideal rows."""

    def __init__(self, monomials, basis, ideal_index, ideal_rows):
        self.monomials = monomials
        self.position = {m: k for k, m in enumerate(monomials)}
        self.basis = basis
        self.ideal_index = ideal_index  # (relation index, multiplier key)
        self.rows = [self._unit(b) for b in basis] + ideal_rows

    def _unit(self, m):
        row = [0] * len(self.monomials)
        row[self.position[m]] = 1
        return row

    def solve(self, m):
        sol = solve_combination(self.rows, self._unit(m))
        if sol is None:
            raise AssertionError(f"monomial {m} is not spanned by basis + ideal")
        nb = len(self.basis)
        return sol[:nb], sol[nb:]


class Presentation:
    """Quantum Stanley-Reisner presentation of QH*_T(M) at one vertex."""

    def __init__(self, spec: PolytopeSpec, vertex=0, ring: Optional[EqRing] = None):
        self.spec = spec
        self.lattice = build_face_lattice(spec)
        self.vertex: Vertex = self.lattice.vertex(vertex)
        self.ring = ring or EqRing(spec)
        ring = self.ring
        N = spec.N
        self.neighbours = self.vertex.facets
        self.free = tuple(j for j in range(N) if j not in self.neighbours)

        # linear relations
        duals = dual_basis([spec.normals[i] for i in self.neighbours])
        self.duals = dict(zip(self.neighbours, duals))
        self.char_map = {
            k + 1: sum((ring.x(i) * -e[k] for i, e in enumerate(spec.normals) if e[k]), ring.zero)
            for k in range(spec.n)
        }
        self.substitutions = {}
        for i, w in self.duals.items():
            expr = ring.zero
            for l in self.free:
                c = pairing(spec.normals[l], w)
                if c:
                    expr = expr - ring.x(l) * c
            for k, wk in enumerate(w):
                if wk:
                    expr = expr - ring.y(k + 1) * wk
            self.substitutions[i] = expr
        self._images = {ring.X0 + i: e for i, e in self.substitutions.items()}

        # shift classes; unreachable facets are recorded and reported lazily
        self._shift: dict[int, Optional[NovikovExponent]] = {}
        for i in range(N):
            try:
                self._shift[i] = shift_class(spec, self.vertex.id, i)
            except NoPath:
                self._shift[i] = None

        self.relations = tuple(self._build_relation(I) for I in primitive_sets(spec))
        self._tops = []
        self._tails = []
        for rel in self.relations:
            self._tops.append({ring.xpart(k): c for k, c in rel.top.terms.items()})
            self._tails.append((rel.rewritten - rel.top).terms)
        self._tables: dict[int, _DegreeTable] = {}
        self._nf: dict[tuple, dict] = {}
        self._reduced: dict[EqPoly, EqPoly] = {}
        self.basis_keys = self._select_basis()
        self.basis = tuple(ring.monomial(k) for k in self.basis_keys)
        self.basis_index = {k: n for n, k in enumerate(self.basis_keys)}
        expected = len(self.lattice.vertices)
        if len(self.basis) != expected:
            raise AssertionError(
                f"classical quotient has rank {len(self.basis)}, expected {expected} (one per vertex)"
            )

    # -- construction -----------------------------------------------------
    def shift_class(self, i: int) -> NovikovExponent:
        if not 0 <= i < self.spec.N:
            raise IndexError(f"facet index {i} out of range")
        d = self._shift[i]
        if d is None:
            raise NoPath(f"facet F{i} is not reachable from {self.vertex.name} by bounded edges")
        return d

    @property
    def shift_classes(self) -> tuple:
        return tuple(self._shift[i] for i in range(self.spec.N))

    def _build_relation(self, I) -> QSRRelation:
        spec, ring = self.spec, self.ring
        v = tuple(sum(spec.normals[i][k] for i in I) for k in range(spec.n))
        J, c = solve_in_cone(v, self.lattice.fan)
        d = NovikovExponent.zero(spec.N)
        for j, cj in zip(J, c):
            d = d + cj * self.shift_class(j)
        for i in I:
            d = d - self.shift_class(i)
        if not d.in_kernel(spec.normals):
            raise AssertionError(f"d_I = {d.vector} is not in H_2")
        if d.energy(spec.offsets) <= 0 or d.chern <= 0:
            raise NotMonotone(
                f"primitive set {list(I)}: d_I = {list(d.vector)} has energy "
                f"{d.energy(spec.offsets)} and c_1 = {d.chern}; reduction would not terminate"
            )
        lhs = ring.one
        for i in I:
            lhs = lhs * ring.x(i)
        rhs = ring.q(d)
        for j, cj in zip(J, c):
            rhs = rhs * ring.x(j) ** cj
        relation = lhs - rhs
        rewritten = self.eliminate(relation)
        top_deg = rewritten.xdegree()
        top = EqPoly(ring, {k: a for k, a in rewritten.terms.items() if ring.xdegree(k) == top_deg})
        if any(any(ring.coefpart(k)) for k in top.terms):
            raise NotMonotone(f"leading part of the relation for {list(I)} involves q, u0 or y")
        lead_key = max(top.terms, key=lambda k: tuple(reversed(ring.xpart(k))))
        lead_c = top.terms[lead_key]
        if abs(lead_c) == 1:
            lead = ring.monomial(lead_key)
            rule_rhs = lead - rewritten * lead_c
        else:
            lead = rule_rhs = None
        return QSRRelation(tuple(I), tuple(J), tuple(c), d, relation, rewritten, top, lead, rule_rhs)

    # free monomials are full-width keys whose only nonzero entries sit in
    # the x positions of free variables
    def _free_monomials(self, k: int) -> list[tuple]:
        ring = self.ring
        out = []
        for combo in combinations_with_replacement(self.free, k):
            key = [0] * ring.width
            for j in combo:
                key[ring.X0 + j] += 1
            out.append(tuple(key))
        # ascending in the order whose standard monomials favour early variables
        out.sort(key=lambda m: tuple(reversed(ring.xpart(m))))
        return out

    def _table(self, k: int) -> _DegreeTable:
        table = self._tables.get(k)
        if table is not None:
            return table
        ring = self.ring
        monomials = self._free_monomials(k)
        pos = {m: n for n, m in enumerate(monomials)}
        ideal_index, ideal_rows = [], []
        for r, top in enumerate(self._tops):
            t = sum(next(iter(top)))
            if t > k:
                continue
            for nu in self._free_monomials(k - t):
                row = [0] * len(monomials)
                for xk, c in top.items():
                    key = nu[: ring.X0] + tuple(map(add, nu[ring.X0:], xk))
                    row[pos[key]] += c
                ideal_index.append((r, nu))
                ideal_rows.append(row)
        base_rank = rank(ideal_rows) if ideal_rows else 0
        kept: list[tuple] = []
        kept_rows: list[list[int]] = []
        for m in monomials:
            if len(kept) + base_rank == len(monomials):
                break
            unit = [0] * len(monomials)
            unit[pos[m]] = 1
            if rank(ideal_rows + kept_rows + [unit]) > base_rank + len(kept):
                kept.append(m)
                kept_rows.append(unit)
        table = _DegreeTable(monomials, kept, ideal_index, ideal_rows)
        self._tables[k] = table
        return table

    def _select_basis(self) -> tuple:
        basis = []
        k = 0
        while True:
            table = self._table(k)
            if not table.basis:
                break
            basis.extend(table.basis)
            k += 1
        return tuple(basis)

    @property
    def classical_rank(self) -> int:
        return len(self.basis)

    # -- normal form ------------------------------------------------------
    def eliminate(self, expr: EqPoly) -> EqPoly:
        """Replace every neighbouring x_i by its linear-relation image."""
        self._check_ring(expr)
        return expr.substitute(self._images)

    def _check_ring(self, expr: EqPoly):
        if expr.ring is not self.ring and expr.ring != self.ring:
            raise MixedContext(f"expression over {expr.ring.spec}, presentation over {self.spec}")

    def _nf_monomial(self, mu: tuple) -> dict:
        cached = self._nf.get(mu)
        if cached is not None:
            return cached
        ring = self.ring
        if mu in self.basis_index:
            out = {mu: Fraction(1)}
        else:
            k = ring.xdegree(mu)
            table = self._table(k)
            coeffs, g = table.solve(mu)
            out = {}
            for b, c in zip(table.basis, coeffs):
                if c:
                    out[b] = out.get(b, 0) + c
            lower: dict[tuple, Fraction] = {}
            for (r, nu), gi in zip(table.ideal_index, g):
                if not gi:
                    continue
                for key, c in self._tails[r].items():
                    kk = tuple(map(add, key, nu))
                    lower[kk] = lower.get(kk, 0) - gi * c
            for key, c in self._reduce_terms(lower).items():
                out[key] = out.get(key, 0) + c
            out = {key: c for key, c in out.items() if c}
        self._nf[mu] = out
        return out

    def _reduce_terms(self, terms: Mapping[tuple, Fraction]) -> dict:
        ring = self.ring
        X0 = ring.X0
        out: dict[tuple, Fraction] = {}
        for key, c in terms.items():
            if not c:
                continue
            mu = (0,) * X0 + key[X0:]
            coef = key[:X0]
            for b, v in self._nf_monomial(mu).items():
                kk = tuple(map(add, coef, b[:X0])) + b[X0:]
                out[kk] = out.get(kk, 0) + c * v
        return {k: c for k, c in out.items() if c}

    def reduce(self, expr: EqPoly) -> EqPoly:
        cached = self._reduced.get(expr)
        if cached is not None:
            return cached
        eliminated = self.eliminate(expr)
        terms = self._reduce_terms(eliminated.terms)
        ints = {}
        for k, c in terms.items():
            c = Fraction(c)
            if c.denominator != 1:
                raise NotIntegral(f"coefficient {c} in the normal form of {expr}")
            ints[k] = int(c)
        out = EqPoly(self.ring, ints)
        self._reduced[expr] = out
        return out

    def expand(self, expr: EqPoly) -> list[EqPoly]:
        """Coefficients (in q, u0, y) of expr on the internal basis."""
        ring = self.ring
        coeffs: list[dict] = [{} for _ in self.basis_keys]
        for key, c in self.reduce(expr).terms.items():
            b = (0,) * ring.X0 + key[ring.X0:]
            coeffs[self.basis_index[b]][ring.coefpart(key)] = c
        return [EqPoly(ring, t) for t in coeffs]

    def combine(self, coeffs: Sequence[EqPoly]) -> EqPoly:
        out = self.ring.zero
        for c, b in zip(coeffs, self.basis):
            if c:
                out = out + c * b
        return out

    # -- differentiation --------------------------------------------------
    def alpha_vector(self, alpha) -> tuple:
        """Normalize a direction: index j, mapping {j: a_j}, or length-N vector."""
        N = self.spec.N
        if isinstance(alpha, int):
            vec = [0] * N
            vec[alpha] = 1
        elif isinstance(alpha, Mapping):
            vec = [0] * N
            for j, a in alpha.items():
                vec[j] += a
        else:
            vec = list(alpha)
            if len(vec) != N:
                raise ValueError(f"direction needs {N} entries")
        bad = [j for j in self.neighbours if vec[j]]
        if bad:
            raise NeighbourDirection(
                f"direction involves x{bad[0]}, a neighbour of {self.vertex.name}; "
                f"allowed directions are {['x%d' % j for j in self.free]}"
            )
        return tuple(vec)

    def differentiate(self, alpha, expr: EqPoly) -> EqPoly:
        """Term-wise q-derivative of the canonical form of expr."""
        vec = self.alpha_vector(alpha)
        ring = self.ring
        weights = [NovikovExponent(K).pair(vec) for K in ring.kernel]
        out = {}
        for key, c in self.reduce(expr).terms.items():
            w = sum(a * b for a, b in zip(key[: ring.rank], weights))
            if w:
                out[key] = c * w
        return EqPoly(ring, out)

    # -- bases --------------------------------------------------------------
    def validate_basis(self, monomials: Sequence[EqPoly]) -> "BasisSpec":
        return validate_basis(monomials, self)

    @cached_property
    def internal_basis(self) -> "BasisSpec":
        ring = self.ring
        n = len(self.basis)
        eye = polymatrix.identity(ring, n)
        return BasisSpec(self, tuple(self.basis), tuple(self.basis), eye, eye, ring.one)

    # -- text ---------------------------------------------------------------
    def linear_relations(self, equivariant: bool = True) -> list[EqPoly]:
        """y_k + sum_i <e_i, y_k> x_i, one per character (y dropped if not equivariant)."""
        ring = self.ring
        out = []
        for k, img in sorted(self.char_map.items()):
            rel = -img
            if equivariant:
                rel = ring.y(k) + rel
            out.append(rel)
        return out

    def to_document(self) -> dict:
        ring = self.ring
        return {
            "spec": spec_to_document(self.spec),
            "vertex": self.vertex.name,
            "vertex_facets": list(self.vertex.facets),
            "neighbours": list(self.neighbours),
            "free": list(self.free),
            "kernel": [list(K) for K in ring.kernel],
            "char_map": {f"y{k}": str(e) for k, e in sorted(self.char_map.items())},
            "substitutions": {f"x{i}": str(e) for i, e in sorted(self.substitutions.items())},
            "relations": [
                {
                    "primitive_set": list(r.primitive_set),
                    "cone": list(r.cone),
                    "coefficients": list(r.coefficients),
                    "d_I": list(r.exponent.vector),
                    "relation": str(r.relation),
                    "rewritten": str(r.rewritten),
                    "rule": r.rule_text(),
                }
                for r in self.relations
            ],
            "shift_classes": [None if d is None else list(d.vector) for d in self.shift_classes],
            "basis": [str(b) for b in self.basis],
        }

    def fingerprint(self) -> str:
        payload = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def pretty(self) -> str:
        ring = self.ring
        lines = [f"{self.spec}  vertex {self.vertex.name} on facets {list(self.vertex.facets)}"]
        lines.append("H_2 basis: " + ", ".join(str(list(K)) for K in ring.kernel))
        lines.append("characters:")
        for k, e in sorted(self.char_map.items()):
            lines.append(f"  y{k} -> {e}")
        lines.append("eliminated neighbours:")
        for i, e in sorted(self.substitutions.items()):
            lines.append(f"  x{i} = {e}")
        lines.append("quantum Stanley-Reisner relations:")
        for r in self.relations:
            lines.append(f"  {r.relation}    d_I = {list(r.exponent.vector)}")
            lines.append(f"    rule {r.rule_text()}")
        lines.append("shift classes d_i:")
        for i, d in enumerate(self.shift_classes):
            lines.append(f"  d{i} = " + ("unreachable" if d is None else str(list(d.vector))))
        lines.append("basis: " + ", ".join(str(b) for b in self.basis))
        collapsed = single_variable_presentation(self)
        if collapsed:
            lines.append("non-equivariant, x_i -> x: " + collapsed)
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """A module basis together with its change of basis to the internal one.

    ``change[i][j]`` is the coefficient of internal basis element i in the
    canonical form of ``monomials[j]``; ``inverse`` is its inverse matrix.
    """

    pres: Presentation
    monomials: tuple
    canonical: tuple
    change: list
    inverse: list
    det: EqPoly

    def __len__(self):
        return len(self.monomials)

    def coordinates(self, expr: EqPoly) -> list[EqPoly]:
        internal = self.pres.expand(expr)
        return [
            sum((a * c for a, c in zip(row, internal) if a and c), self.pres.ring.zero)
            for row in self.inverse
        ]

    def combine(self, coeffs: Sequence[EqPoly]) -> EqPoly:
        out = self.pres.ring.zero
        for c, b in zip(coeffs, self.canonical):
            if c:
                out = out + c * b
        return out

    def same_as(self, other: "BasisSpec") -> bool:
        return self.pres is other.pres and self.canonical == other.canonical

    def labels(self) -> list[str]:
        return [str(m) for m in self.monomials]


def build_presentation(spec: PolytopeSpec, vertex=0) -> Presentation:
    return Presentation(spec, vertex)


def canonical_reduce(expr: EqPoly, pres: Presentation) -> EqPoly:
    return pres.reduce(expr)


def differentiate(alpha, expr: EqPoly, pres: Presentation) -> EqPoly:
    return pres.differentiate(alpha, expr)


def validate_basis(monomials: Sequence[EqPoly], pres: Presentation) -> BasisSpec:
    """Accept a user basis iff its change matrix has determinant +-q^A."""
    ring = pres.ring
    n = pres.classical_rank
    if len(monomials) != n:
        raise NotABasis(f"expected {n} elements (rank of the classical quotient), got {len(monomials)}")
    canonical = tuple(pres.reduce(m) for m in monomials)
    cols = [pres.expand(m) for m in canonical]
    change = polymatrix.transpose(cols)
    det = polymatrix.determinant(change, ring)
    try:
        inv_det = polymatrix.unit_inverse(det)
    except NotDivisible:
        raise NotABasis(f"change-of-basis determinant {det} is not a unit +-q^A") from None
    inverse = polymatrix.scale(polymatrix.adjugate(change, ring), inv_det)
    return BasisSpec(pres, tuple(monomials), canonical, change, inverse, det)


def single_variable_presentation(pres: Presentation) -> Optional[str]:
    """Non-equivariant relations with every x_i set to one variable x.

    Returns None unless the linear relations are consistent with that
    collapse (as for projective spaces).
    """
    ring = pres.ring
    images = {ring.X0 + i: ring.x(0) for i in range(1, ring.spec.N)}
    images[ring.U] = ring.zero
    for k in range(ring.n):
        images[ring.Y0 + k] = ring.zero
    if any(rel.substitute(images) for rel in pres.linear_relations(equivariant=False)):
        return None
    rels = [str(r.relation.substitute(images)).replace("x0", "x") for r in pres.relations]
    return "Λ[x]/(" + ", ".join(rels) + ")"
