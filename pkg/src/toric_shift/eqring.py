"""The ring Lambda[u0, y_1..y_n, x_0..x_{N-1}] with a Novikov grading.

Monomials are flat integer tuples laid out as::

    (q-coordinates in the kernel basis | u0 | y_1..y_n | x_0..x_{N-1})

The q part may be negative (Laurent in q); every other exponent is
nonnegative.  ``EqPoly`` is an immutable sparse map monomial -> int.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from operator import add
from typing import Mapping, Optional, Sequence, Union

from .errors import ExpressionSyntaxError, MixedContext, UnknownVariable
from .lattice import combination, kernel_basis, solve_combination
from .polytope import NovikovExponent, PolytopeSpec


class _Inhomogeneous(enum.Enum):
    INHOMOGENEOUS = "inhomogeneous"

    def __repr__(self):
        return "INHOMOGENEOUS"


INHOMOGENEOUS = _Inhomogeneous.INHOMOGENEOUS


class EqRing:
    """Coefficient data shared by all polynomials over one polytope."""

    def __init__(self, spec: PolytopeSpec):
        self.spec = spec
        self.n = spec.n
        self.N = spec.N
        self.kernel = tuple(kernel_basis(spec.normals))
        self.rank = len(self.kernel)
        self.qchern = tuple(sum(A) for A in self.kernel)
        self.qenergy = tuple(NovikovExponent(A).energy(spec.offsets) for A in self.kernel)
        r = self.rank
        self.U = r
        self.Y0 = r + 1
        self.X0 = r + 1 + self.n
        self.width = self.X0 + self.N
        self.zero = EqPoly(self, {})
        self.one = self.const(1)

    def __eq__(self, other):
        return isinstance(other, EqRing) and (
            self is other or (self.spec.normals, self.spec.offsets) == (other.spec.normals, other.spec.offsets)
        )

    def __hash__(self):
        return hash((self.spec.normals, self.spec.offsets))

    def __repr__(self):
        return f"EqRing({self.spec})"

    # -- constructors -----------------------------------------------------
    def _unit(self, pos: int, power: int = 1) -> tuple:
        key = [0] * self.width
        key[pos] = power
        return tuple(key)

    def const(self, c: int) -> "EqPoly":
        return EqPoly(self, {(0,) * self.width: c})

    def u0(self) -> "EqPoly":
        return EqPoly(self, {self._unit(self.U): 1})

    def y(self, k: int) -> "EqPoly":
        """Character y_k, 1-based as in H*(BT) = Z[y_1, ..., y_n]."""
        if not 1 <= k <= self.n:
            raise UnknownVariable(f"y{k} (characters are y1..y{self.n})")
        return EqPoly(self, {self._unit(self.Y0 + k - 1): 1})

    def x(self, i: int) -> "EqPoly":
        if not 0 <= i < self.N:
            raise UnknownVariable(f"x{i} (divisors are x0..x{self.N - 1})")
        return EqPoly(self, {self._unit(self.X0 + i): 1})

    def q(self, exponent: Union[NovikovExponent, Sequence[int], int]) -> "EqPoly":
        """q^A for a Novikov exponent, or kernel coordinates (int when rank 1)."""
        coords = self.q_coords(exponent)
        return EqPoly(self, {tuple(coords) + (0,) * (self.width - self.rank): 1})

    def q_coords(self, exponent) -> tuple:
        if isinstance(exponent, NovikovExponent):
            if len(exponent.vector) != self.N:
                raise MixedContext(f"exponent {exponent.vector} has wrong length")
            sol = solve_combination(self.kernel, exponent.vector) if self.kernel else (
                [] if not any(exponent.vector) else None)
            if sol is None or any(c.denominator != 1 for c in sol):
                raise ValueError(f"{exponent.vector} is not in the kernel lattice")
            return tuple(int(c) for c in sol)
        if isinstance(exponent, int):
            if self.rank != 1:
                raise ValueError(f"integer q-exponent needs rank 1, H_2 has rank {self.rank}")
            return (exponent,)
        coords = tuple(int(c) for c in exponent)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} kernel coordinates, got {len(coords)}")
        return coords

    def exponent(self, coords: Sequence[int]) -> NovikovExponent:
        if not self.kernel:
            return NovikovExponent.zero(self.N)
        return NovikovExponent(combination(coords, self.kernel))

    def monomial(self, key: Sequence[int], coeff: int = 1) -> "EqPoly":
        return EqPoly(self, {tuple(key): coeff})

    # -- per-monomial data ------------------------------------------------
    def qpart(self, key) -> tuple:
        return key[: self.rank]

    def xpart(self, key) -> tuple:
        return key[self.X0:]

    def coefpart(self, key) -> tuple:
        """Key with the x exponents zeroed."""
        return key[: self.X0] + (0,) * self.N

    def chern(self, key) -> int:
        return sum(c * h for c, h in zip(key, self.qchern))

    def energy(self, key) -> Fraction:
        return sum((c * e for c, e in zip(key, self.qenergy)), Fraction(0))

    def degree(self, key) -> int:
        return 2 * (self.chern(key) + sum(key[self.U:]))

    def xdegree(self, key) -> int:
        return sum(key[self.X0:])

    # -- text -------------------------------------------------------------
    def parse(self, text: str) -> "EqPoly":
        return _Parser(self, text).parse()

    def format(self, p: "EqPoly") -> str:
        return _format(self, p)

    def sort_key(self, key):
        """Printing order: energy, then degree (high first), then lexicographic."""
        return (
            self.energy(key),
            -self.degree(key),
            tuple(-e for e in key[self.X0:]),
            tuple(-e for e in key[self.U:self.X0]),
            key[: self.rank],
        )


Coefficient = Union[int, "EqPoly"]


class EqPoly:
    """Immutable finite sum of monomials with integer coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: EqRing, terms: Mapping[tuple, int]):
        self.ring = ring
        self.terms = {k: c for k, c in terms.items() if c}
        self._hash = None

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "EqPoly":
        if isinstance(other, EqPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise MixedContext(f"{self.ring.spec} vs {other.ring.spec}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return EqPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return EqPoly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return EqPoly(self.ring, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, int] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(map(add, k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return EqPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scalar_mul(self, c: int) -> "EqPoly":
        return self * c

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = self.ring.const(other)
        if not isinstance(other, EqPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection -------------------------------------------------------
    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def has_x(self) -> bool:
        X0 = self.ring.X0
        return any(any(k[X0:]) for k in self.terms)

    def xdegree(self) -> int:
        return max((self.ring.xdegree(k) for k in self.terms), default=0)

    def map_coefficients(self, f) -> "EqPoly":
        return EqPoly(self.ring, {k: f(c) for k, c in self.terms.items()})

    def substitute(self, images: Mapping[int, "EqPoly"]) -> "EqPoly":
        """Replace the variable at flat position ``pos`` by ``images[pos]``."""
        ring = self.ring
        out: dict[tuple, int] = {}
        powers: dict[tuple, EqPoly] = {}
        for key, c in self.terms.items():
            rest = list(key)
            term = None
            for pos, img in images.items():
                e = key[pos]
                if e:
                    rest[pos] = 0
                    pw = powers.get((pos, e))
                    if pw is None:
                        pw = powers[(pos, e)] = img ** e
                    term = pw if term is None else term * pw
            rest = tuple(rest)
            if term is None:
                out[rest] = out.get(rest, 0) + c
                continue
            for k2, c2 in term.terms.items():
                k = tuple(map(add, rest, k2))
                out[k] = out.get(k, 0) + c * c2
        return EqPoly(ring, out)

    def __str__(self):
        return self.ring.format(self)

    def __repr__(self):
        return f"EqPoly({self.ring.format(self)!r})"


def grade(p: EqPoly):
    """Common degree of all terms, ``INHOMOGENEOUS``, or None for zero."""
    degrees = {p.ring.degree(k) for k in p.terms}
    if not degrees:
        return None
    if len(degrees) > 1:
        return INHOMOGENEOUS
    return degrees.pop()


def parse(ring: EqRing, text: str) -> EqPoly:
    return ring.parse(text)


def format_poly(p: EqPoly) -> str:
    return p.ring.format(p)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _format_q(ring: EqRing, coords) -> Optional[str]:
    if not any(coords):
        return None
    if ring.rank == 1:
        (k,) = coords
        return "q" if k == 1 else f"q^{k}"
    return "q^[" + ",".join(str(c) for c in coords) + "]"


def _monomial_factors(ring: EqRing, key) -> list[str]:
    factors = []
    qs = _format_q(ring, key[: ring.rank])
    if qs:
        factors.append(qs)

    def var(name, e):
        if e:
            factors.append(name if e == 1 else f"{name}^{e}")

    var("u0", key[ring.U])
    for k in range(ring.n):
        var(f"y{k + 1}", key[ring.Y0 + k])
    for i in range(ring.N):
        var(f"x{i}", key[ring.X0 + i])
    return factors


def _format(ring: EqRing, p: EqPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for key in sorted(p.terms, key=ring.sort_key):
        c = p.terms[key]
        factors = _monomial_factors(ring, key)
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    """Recursive descent over ``expr := term (('+'|'-') term)*``."""

    def __init__(self, ring: EqRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise ExpressionSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> EqPoly:
        if self.peek()[0] == "end":
            raise ExpressionSyntaxError("empty expression", 0)
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {val!r}", pos)
        return result

    def expr(self) -> EqPoly:
        result = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> EqPoly:
        result = self.factor()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> EqPoly:
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            f = self.factor()
            return -f if val == "-" else f
        if kind == "name" and val == "q":
            self.take()
            return self.qpower(pos)
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            kind, val, epos = self.take()
            if kind == "op" and val == "-":
                raise ExpressionSyntaxError("negative exponent is only allowed on q", epos)
            if kind != "int":
                raise ExpressionSyntaxError("expected an integer exponent", epos)
            base = base ** int(val)
        return base

    def qpower(self, pos) -> EqPoly:
        ring = self.ring
        if self.peek()[1] != "^" or self.peek()[0] != "op":
            if ring.rank != 1:
                raise UnknownVariable(f"bare q at position {pos}: H_2 has rank {ring.rank}, write q^[...]")
            return ring.q((1,))
        self.take()
        kind, val, epos = self.peek()
        if kind == "op" and val == "[":
            self.take()
            coords = [self.signed_int()]
            while self.peek()[1] == ",":
                self.take()
                coords.append(self.signed_int())
            self.expect("]")
            if len(coords) != ring.rank:
                raise ExpressionSyntaxError(f"q^[...] needs {ring.rank} coordinates", epos)
            return ring.q(tuple(coords))
        k = self.signed_int()
        if ring.rank != 1:
            raise UnknownVariable(f"q^{k} at position {pos}: H_2 has rank {ring.rank}, write q^[...]")
        return ring.q((k,))

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ExpressionSyntaxError("expected an integer", pos)
        return sign * int(val)

    def atom(self) -> EqPoly:
        kind, val, pos = self.take()
        ring = self.ring
        if kind == "int":
            return ring.const(int(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            if val == "u0":
                return ring.u0()
            m = re.fullmatch(r"([xy])(\d+)", val)
            if m:
                idx = int(m.group(2))
                try:
                    return ring.x(idx) if m.group(1) == "x" else ring.y(idx)
                except UnknownVariable as exc:
                    raise UnknownVariable(f"{exc} at position {pos}") from None
            raise UnknownVariable(f"{val!r} at position {pos}")
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", pos)
        raise ExpressionSyntaxError(f"unexpected {val!r}", pos)
