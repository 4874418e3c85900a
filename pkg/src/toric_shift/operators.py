"""Connections, shift operators and the matrices built from them.

A :class:`SemilinearOperator` is stored as a matrix over Lambda[u0, y] in a
chosen basis together with a twist cocharacter sigma; it acts by

    Op(f * b) = E_sigma(f) * Op(b),    E_sigma: y_k -> y_k + sigma_k * u0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _fold
from typing import Optional, Sequence

from . import polymatrix
from .eqring import EqPoly, grade
from .errors import BasisMismatch, ContainsXVariables, InvalidSpec
from .polytope import Kind
from .presentation import BasisSpec, Presentation


# ---------------------------------------------------------------------------
# connection
# ---------------------------------------------------------------------------

def connection_apply(j: int, expr: EqPoly, pres: Presentation, broken: bool = False) -> EqPoly:
    """nabla_j = u0 * d/dx_j + x_j, reduced.  ``broken`` drops the x_j term."""
    ring = pres.ring
    pres.alpha_vector(j)  # rejects neighbouring directions
    out = ring.u0() * pres.differentiate(j, expr)
    if not broken:
        out = out + ring.x(j) * expr
    return pres.reduce(out)


@dataclass(frozen=True)
class Connection:
    pres: Presentation
    j: int
    broken: bool = False

    def __post_init__(self):
        self.pres.alpha_vector(self.j)

    def __call__(self, expr: EqPoly) -> EqPoly:
        return connection_apply(self.j, expr, self.pres, self.broken)

    @property
    def degree(self) -> int:
        return 2


# ---------------------------------------------------------------------------
# twists
# ---------------------------------------------------------------------------

def twist(f: EqPoly, sigma: Sequence[int]) -> EqPoly:
    """Pullback along a cocharacter: y_k -> y_k + sigma_k u0; q, u0 fixed."""
    ring = f.ring
    if f.has_x():
        raise ContainsXVariables(f"{f} contains x variables; only coefficients can be twisted")
    if len(sigma) != ring.n:
        raise ValueError(f"cocharacter needs {ring.n} entries")
    if not any(sigma):
        return f
    images = {
        ring.Y0 + k: ring.y(k + 1) + ring.u0() * s for k, s in enumerate(sigma) if s
    }
    return f.substitute(images)


def twisted_pullback(i: int, f: EqPoly) -> EqPoly:
    """(B sigma_i)^* on coefficients, sigma_i = e_i."""
    return twist(f, f.ring.spec.normals[i])


# ---------------------------------------------------------------------------
# semilinear operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SemilinearOperator:
    """Matrix (column c = image of basis element c) plus twist."""

    pres: Presentation
    basis: BasisSpec
    twist: tuple
    matrix: list
    degree: Optional[int] = None
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.matrix)

    def __call__(self, expr: EqPoly) -> EqPoly:
        return operator_apply(self, expr)

    def images(self) -> list[EqPoly]:
        """Canonical forms of the images of the basis elements."""
        cols = polymatrix.transpose(self.matrix)
        return [self.basis.combine(c) for c in cols]

    def specialize(self, zero_u0: bool = True, zero_y: bool = True) -> list:
        ring = self.pres.ring
        images = {}
        if zero_u0:
            images[ring.U] = ring.zero
        if zero_y:
            images.update({ring.Y0 + k: ring.zero for k in range(ring.n)})
        return polymatrix.map_entries(self.matrix, lambda a: a.substitute(images))

    def with_basis(self, basis: BasisSpec) -> "SemilinearOperator":
        """Same operator, matrix rewritten in another basis."""
        if basis.pres is not self.pres:
            raise BasisMismatch("bases belong to different presentations")
        cols = [basis.coordinates(operator_apply(self, m)) for m in basis.canonical]
        return SemilinearOperator(
            self.pres, basis, self.twist, polymatrix.transpose(cols), self.degree, self.label
        )

    def to_document(self) -> dict:
        return {
            "label": self.label,
            "basis": self.basis.labels(),
            "twist": list(self.twist),
            "degree": self.degree,
            "matrix": polymatrix.format_matrix(self.matrix),
        }

    def pretty(self) -> str:
        lines = []
        if self.label:
            lines.append(self.label)
        lines.append(f"twist {list(self.twist)}  degree {self.degree}")
        labels = self.basis.labels()
        for b, col in zip(labels, polymatrix.transpose(self.matrix)):
            lines.append(f"  {b} -> {format_in_basis(col, labels)}")
        return "\n".join(lines)


def format_in_basis(coords: Sequence[EqPoly], labels: Sequence[str]) -> str:
    """sum_k coords[k] * labels[k], parenthesizing compound coefficients."""
    parts = []
    for c, b in zip(coords, labels):
        if not c:
            continue
        text = str(c)
        if b == "1":
            parts.append(text if len(c) == 1 else f"({text})")
        elif c == 1:
            parts.append(b)
        elif c == -1:
            parts.append(f"-{b}")
        else:
            parts.append(f"{text}*{b}" if len(c) == 1 else f"({text})*{b}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _basis(pres: Presentation, basis: Optional[BasisSpec]) -> BasisSpec:
    if basis is None:
        return pres.internal_basis
    if basis.pres is not pres:
        raise BasisMismatch("basis was validated against a different presentation")
    return basis


def operator_apply(op: SemilinearOperator, expr: EqPoly) -> EqPoly:
    ring = op.pres.ring
    coords = [twist(c, op.twist) for c in op.basis.coordinates(expr)]
    out = []
    for row in op.matrix:
        acc = ring.zero
        for a, c in zip(row, coords):
            if a and c:
                acc = acc + a * c
        out.append(acc)
    return op.basis.combine(out)


def operator_compose(op1: SemilinearOperator, op2: SemilinearOperator) -> SemilinearOperator:
    """op1 o op2: matrix M1 * E_{sigma1}(M2), twist sigma1 + sigma2."""
    if op1.pres is not op2.pres or not op1.basis.same_as(op2.basis):
        raise BasisMismatch("operators are expressed in different bases")
    m2 = polymatrix.map_entries(op2.matrix, lambda a: twist(a, op1.twist))
    deg = None if op1.degree is None or op2.degree is None else op1.degree + op2.degree
    label = f"{op1.label} o {op2.label}" if op1.label and op2.label else ""
    return SemilinearOperator(
        op1.pres,
        op1.basis,
        tuple(a + b for a, b in zip(op1.twist, op2.twist)),
        polymatrix.matmul(op1.matrix, m2),
        deg,
        label,
    )


def identity_operator(pres: Presentation, basis: Optional[BasisSpec] = None) -> SemilinearOperator:
    basis = _basis(pres, basis)
    n = len(basis)
    return SemilinearOperator(
        pres, basis, (0,) * pres.spec.n, polymatrix.identity(pres.ring, n), 0, "id"
    )


def pullback_operator(sigma: Sequence[int], pres: Presentation, basis: Optional[BasisSpec] = None) -> SemilinearOperator:
    """E_sigma at the character level: twists coordinates, fixes the given basis."""
    basis = _basis(pres, basis)
    sigma = tuple(sigma)
    return SemilinearOperator(
        pres, basis, sigma, polymatrix.identity(pres.ring, len(basis)), 0, f"E{list(sigma)}"
    )


def _compute_images(pres: Presentation, start: EqPoly, step) -> list[EqPoly]:
    """Values on the internal basis, each basis monomial from a divisor.

    ``step(j, p, value_p, value_of)`` returns the value on x_j * p.
    """
    ring = pres.ring
    X0 = ring.X0
    values: list[Optional[EqPoly]] = [None] * len(pres.basis_keys)

    def value_of(expr: EqPoly, sigma) -> EqPoly:
        # semilinear extension from the values computed so far
        out = ring.zero
        for c, v in zip(pres.expand(expr), values):
            if c:
                if v is None:
                    raise AssertionError("recursion needs a value of higher degree")
                out = out + twist(c, sigma) * v
        return out

    for n, key in enumerate(pres.basis_keys):
        xs = key[X0:]
        if not any(xs):
            values[n] = pres.reduce(start)
            continue
        j = next(pos for pos, e in enumerate(xs) if e)
        p = list(key)
        p[X0 + j] -= 1
        values[n] = step(j, ring.monomial(tuple(p)), value_of)
    return values


def shift_operator(
    i: int,
    pres: Presentation,
    basis: Optional[BasisSpec] = None,
    drop_u0_correction: bool = False,
) -> SemilinearOperator:
    """S_i from S_i(1) = q^{d_i} x_i and S(x_j p) = nabla_j S(p) - u0 S(d_j p).

    With ``drop_u0_correction`` the recursion degenerates to S(x_j p) = x_j S(p)
    (a deliberately wrong operator, used as a negative control).
    """
    spec, ring = pres.spec, pres.ring
    if not 0 <= i < spec.N:
        raise InvalidSpec(f"facet index {i} out of range 0..{spec.N - 1}")
    sigma = spec.normals[i]
    start = ring.q(pres.shift_class(i)) * ring.x(i)

    def step(j, p, value_of):
        sp = value_of(p, sigma)
        if drop_u0_correction:
            return pres.reduce(ring.x(j) * sp)
        out = connection_apply(j, sp, pres)
        dp = pres.differentiate(j, p)
        if dp:
            out = out - ring.u0() * value_of(dp, sigma)
        return out

    values = _compute_images(pres, start, step)
    inner = pres.internal_basis
    matrix = polymatrix.transpose([pres.expand(v) for v in values])
    g = grade(ring.q(pres.shift_class(i)) * ring.x(i))
    tag = " (u0 correction dropped)" if drop_u0_correction else ""
    op = SemilinearOperator(pres, inner, tuple(sigma), matrix, g, f"S{i}{tag}")
    basis = _basis(pres, basis)
    return op if basis is inner else op.with_basis(basis)


def multiplication_operator(f: EqPoly, pres: Presentation, basis: Optional[BasisSpec] = None) -> SemilinearOperator:
    """Quantum multiplication by f (untwisted)."""
    basis = _basis(pres, basis)
    cols = [basis.coordinates(pres.reduce(f * b)) for b in basis.canonical]
    g = grade(f)
    return SemilinearOperator(
        pres, basis, (0,) * pres.spec.n, polymatrix.transpose(cols),
        g if isinstance(g, int) else None, f"mult({f})",
    )


def operator_power(op: SemilinearOperator, k: int) -> SemilinearOperator:
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return identity_operator(op.pres, op.basis)
    return _fold(operator_compose, [op] * k)


def seidel_sequence_matrix(
    i: int, r: int, pres: Presentation, basis: Optional[BasisSpec] = None
) -> SemilinearOperator:
    """E_{sigma_i}^{-r} o S_i o E_{sigma_i}^{r-1}, an untwisted operator."""
    if r < 1:
        raise ValueError("r must be at least 1")
    basis = _basis(pres, basis)
    sigma = pres.spec.normals[i]
    S = shift_operator(i, pres, basis)
    back = pullback_operator(tuple(-r * s for s in sigma), pres, basis)
    fwd = pullback_operator(tuple((r - 1) * s for s in sigma), pres, basis)
    op = operator_compose(back, operator_compose(S, fwd))
    return SemilinearOperator(pres, basis, op.twist, op.matrix, S.degree, f"sequence map S{i}, r={r}")


def determinant(op: SemilinearOperator) -> EqPoly:
    return polymatrix.determinant(op.matrix, op.pres.ring)


# ---------------------------------------------------------------------------
# symplectic cohomology
# ---------------------------------------------------------------------------

def _linear_text(rel: EqPoly) -> str:
    # compact form used in the localized presentation, e.g. "x1-x0"
    ring = rel.ring
    terms = []
    for key, c in rel.terms.items():
        terms.append((-c, ring.format(ring.monomial(key)), key))
    terms.sort(key=lambda t: (t[0], [-e for e in t[2]]))
    out = ""
    for negc, name, _ in terms:
        c = -negc
        body = name if abs(c) == 1 else f"{abs(c)}*{name}"
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += ("-" if c < 0 else "+") + body
    return out


def inverted_facet(pres: Presentation) -> Optional[int]:
    """Facet whose divisor is inverted in SH: the fibre facet of a line bundle."""
    return pres.spec.N - 1 if pres.spec.kind is Kind.LINE_BUNDLE else None


def sh_presentation(pres: Presentation) -> str:
    N = pres.spec.N
    inv = inverted_facet(pres)
    gens = ",".join(f"x{i}^±1" if i == inv else f"x{i}" for i in range(N))
    rels = [_linear_text(r) for r in pres.linear_relations(equivariant=False)]
    rels += [str(r.relation) for r in pres.relations]
    return f"Λ[{gens}] / ({', '.join(rels)})"


def sh_rank_nonequivariant(pres: Presentation) -> int:
    """rank QH - dim ker M^n, M = S_fibre at u0 = y = 0, over Frac(Lambda)."""
    inv = inverted_facet(pres)
    if inv is None:
        return pres.classical_rank
    M = shift_operator(inv, pres).specialize()
    n = pres.spec.n
    P = M
    for _ in range(n - 1):
        P = polymatrix.matmul(P, M)
    return polymatrix.rank(P)
