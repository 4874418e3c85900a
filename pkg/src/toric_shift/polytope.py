"""Moment polytopes of smooth toric manifolds and their normal fans.

A polytope is given by inequalities ``<e_i, y> >= lambda_i``.  From it we
enumerate vertices and edges exactly, read off the fan, primitive sets, the
curve classes of bounded edges, and the Novikov exponents ``d_i`` that appear
in ``S_i(1) = q^{d_i} x_i``.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd
from typing import Iterator, Optional, Sequence

from .errors import (
    EmptyPolytope,
    InvalidSpec,
    NoPath,
    NotMonotone,
    NotSmooth,
    UnboundedEdge,
)
from .lattice import (
    Cone,
    combination,
    det,
    dual_basis,
    kernel_basis,
    pairing,
    solve_combination,
    vec_add,
    vec_scale,
)


class Kind(enum.Enum):
    CLOSED = "closed"
    LINE_BUNDLE = "line_bundle"


def _as_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise InvalidSpec(f"offset {value!r} is not a rational number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            pass
    raise InvalidSpec(f"offset {value!r} is not an integer or a 'p/q' string")


@dataclass(frozen=True)
class PolytopeSpec:
    """Delzant-type polytope {y : <normals[i], y> >= offsets[i]}."""

    n: int
    normals: tuple
    offsets: tuple
    kind: Kind = Kind.CLOSED
    name: str = ""

    def __post_init__(self):
        normals = tuple(tuple(int(x) for x in e) for e in self.normals)
        offsets = tuple(_as_fraction(l) for l in self.offsets)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)
        if self.n < 1:
            raise InvalidSpec("dimension must be positive")
        if len(normals) != len(offsets):
            raise InvalidSpec(f"{len(normals)} normals but {len(offsets)} offsets")
        for i, e in enumerate(normals):
            if len(e) != self.n:
                raise InvalidSpec(f"normal e{i} has length {len(e)}, expected {self.n}")
            g = 0
            for x in e:
                g = gcd(g, x)
            if g != 1:
                raise InvalidSpec(f"normal e{i} = {e} is not primitive")
        if len(set(normals)) != len(normals):
            raise InvalidSpec("repeated facet normal")

    @property
    def N(self) -> int:
        return len(self.normals)

    def __str__(self):
        return self.name or f"polytope(n={self.n}, N={self.N})"


@dataclass(frozen=True)
class Vertex:
    id: int
    facets: tuple  # sorted indices of the n facets through the vertex
    coords: tuple  # exact rational coordinates

    @property
    def name(self) -> str:
        return f"v{self.id}"


@dataclass(frozen=True)
class Edge:
    """One-dimensional face F_I, |I| = n - 1.

    ``direction`` is the primitive integer vector pointing away from
    ``endpoints[0]``; ``length`` is the lattice length (None for a ray).
    """

    facets: tuple
    endpoints: tuple
    direction: tuple
    length: Optional[Fraction]

    @property
    def is_ray(self) -> bool:
        return self.length is None

    def step(self, start: int) -> tuple[int, tuple]:
        """(other endpoint, primitive displacement) when walking from ``start``."""
        if self.is_ray:
            raise UnboundedEdge(f"edge F{list(self.facets)} is a ray")
        a, b = self.endpoints
        if start == a:
            return b, self.direction
        if start == b:
            return a, vec_scale(-1, self.direction)
        raise ValueError(f"v{start} is not an endpoint of edge F{list(self.facets)}")


@dataclass(frozen=True)
class FaceLattice:
    spec: PolytopeSpec
    vertices: tuple
    edges: tuple
    faces: tuple  # (index set, dimension)

    def vertex(self, ref) -> Vertex:
        """Look up a vertex by id, by name ``"v<k>"`` or by its facet set."""
        if isinstance(ref, Vertex):
            return ref
        if isinstance(ref, str):
            if not (ref.startswith("v") and ref[1:].isdigit()):
                raise KeyError(f"bad vertex name {ref!r}")
            ref = int(ref[1:])
        if isinstance(ref, int):
            if not 0 <= ref < len(self.vertices):
                raise KeyError(f"no vertex v{ref}")
            return self.vertices[ref]
        key = tuple(sorted(ref))
        for v in self.vertices:
            if v.facets == key:
                return v
        raise KeyError(f"no vertex on facets {key}")

    @cached_property
    def cone_sets(self) -> frozenset:
        return frozenset(I for I, _ in self.faces)

    @cached_property
    def fan(self) -> tuple:
        return tuple(Cone.from_normals(I, self.spec.normals) for I, _ in self.faces)

    @cached_property
    def adjacency(self) -> dict:
        adj: dict[int, list[tuple[int, Edge]]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            if e.is_ray:
                continue
            a, b = e.endpoints
            adj[a].append((b, e))
            adj[b].append((a, e))
        return {k: sorted(v, key=lambda t: t[0]) for k, v in adj.items()}

    @property
    def rays(self) -> list:
        return [e for e in self.edges if e.is_ray]

    @property
    def bounded_edges(self) -> list:
        return [e for e in self.edges if not e.is_ray]


@lru_cache(maxsize=None)
def build_face_lattice(p: PolytopeSpec) -> FaceLattice:
    """Enumerate vertices, edges and faces of the polytope exactly."""
    n, N = p.n, p.N
    found: dict[tuple, tuple] = {}
    for I in combinations(range(N), n):
        rows = [p.normals[i] for i in I]
        if det(rows) == 0:
            continue
        sol = solve_combination([list(col) for col in zip(*rows)], [p.offsets[i] for i in I])
        y = tuple(sol)
        if any(pairing(p.normals[j], y) < p.offsets[j] for j in range(N)):
            continue
        tight = tuple(j for j in range(N) if pairing(p.normals[j], y) == p.offsets[j])
        if len(tight) != n:
            raise NotSmooth(f"vertex {_fmt_point(y)} lies on {len(tight)} facets (not simple)")
        if abs(det([p.normals[j] for j in tight])) != 1:
            raise NotSmooth(f"normals at vertex {_fmt_point(y)} are not a lattice basis")
        found[tight] = y
    if not found:
        raise EmptyPolytope(f"{p} has no vertices")
    covered = {i for I in found for i in I}
    missing = sorted(set(range(N)) - covered)
    if missing:
        raise InvalidSpec(f"facets {missing} contain no vertex (redundant inequalities)")

    order = sorted(found, reverse=True)
    vertices = tuple(Vertex(k, I, found[I]) for k, I in enumerate(order))

    by_edge: dict[tuple, list[tuple[int, tuple]]] = {}
    for v in vertices:
        duals = dual_basis([p.normals[i] for i in v.facets])
        for a_pos, a in enumerate(v.facets):
            I = tuple(i for i in v.facets if i != a)
            by_edge.setdefault(I, []).append((v.id, duals[a_pos]))
    edges = []
    for I in sorted(by_edge):
        ends = sorted(by_edge[I])
        if len(ends) == 1:
            (a, w), = ends
            edges.append(Edge(I, (a,), w, None))
        else:
            (a, w), (b, _) = ends
            disp = tuple(y1 - y0 for y0, y1 in zip(vertices[a].coords, vertices[b].coords))
            k = next(i for i, x in enumerate(w) if x != 0)
            length = disp[k] / w[k]
            if vec_scale(length, w) != disp or length <= 0:
                raise NotSmooth(f"edge F{list(I)} is not parallel to its primitive direction")
            edges.append(Edge(I, (a, b), w, length))
    if p.kind is Kind.CLOSED and any(e.is_ray for e in edges):
        raise InvalidSpec(f"{p} is declared closed but is unbounded (fan not complete)")

    faces = set()
    for v in vertices:
        for s in range(n + 1):
            faces.update(combinations(v.facets, s))
    faces = tuple((I, n - len(I)) for I in sorted(faces, key=lambda I: (len(I), I)))
    return FaceLattice(p, vertices, tuple(edges), faces)


def _fmt_point(y) -> str:
    return "(" + ", ".join(str(c) for c in y) + ")"


def primitive_sets(p: PolytopeSpec) -> list[tuple]:
    """Inclusion-minimal index sets that do not span a cone of the fan."""
    lat = build_face_lattice(p)
    cones = lat.cone_sets
    out = []
    for s in range(1, p.n + 2):
        for I in combinations(range(p.N), s):
            if I in cones:
                continue
            if all(tuple(j for j in I if j != i) in cones for i in I):
                out.append(I)
    return out


@dataclass(frozen=True)
class NovikovExponent:
    """A class A in H_2(M), stored as its intersection numbers A_i = D_i . A."""

    vector: tuple

    def __add__(self, other: "NovikovExponent") -> "NovikovExponent":
        return NovikovExponent(vec_add(self.vector, other.vector))

    def __sub__(self, other: "NovikovExponent") -> "NovikovExponent":
        return self + (-other)

    def __neg__(self) -> "NovikovExponent":
        return NovikovExponent(vec_scale(-1, self.vector))

    def __rmul__(self, k: int) -> "NovikovExponent":
        return NovikovExponent(vec_scale(k, self.vector))

    @property
    def chern(self) -> int:
        return sum(self.vector)

    @property
    def degree(self) -> int:
        return 2 * self.chern

    def energy(self, offsets: Sequence) -> Fraction:
        return -sum(Fraction(l) * a for l, a in zip(offsets, self.vector))

    def pair(self, alpha: Sequence) -> int:
        """Pairing with the degree-2 class sum_j alpha_j x_j."""
        return pairing(alpha, self.vector)

    def in_kernel(self, normals: Sequence) -> bool:
        return all(x == 0 for x in combination(self.vector, normals))

    @classmethod
    def zero(cls, N: int) -> "NovikovExponent":
        return cls((0,) * N)


CurveClass = NovikovExponent


def wall_curve_class(edge: Edge, p: PolytopeSpec) -> NovikovExponent:
    """Class of the invariant sphere over a bounded edge (toric wall relation)."""
    if edge.is_ray:
        raise UnboundedEdge(f"edge F{list(edge.facets)} is a ray")
    lat = build_face_lattice(p)
    lo, hi = (lat.vertices[k] for k in edge.endpoints)
    (a,) = set(lo.facets) - set(edge.facets)
    (b,) = set(hi.facets) - set(edge.facets)
    duals = dual_basis([p.normals[i] for i in lo.facets])
    coeff = {i: pairing(p.normals[b], w) for i, w in zip(lo.facets, duals)}
    if coeff[a] != -1:
        raise NotSmooth(f"wall relation across F{list(edge.facets)} has e{a}-coefficient {coeff[a]}")
    A = [0] * p.N
    A[a] = 1
    A[b] = 1
    for i in edge.facets:
        A[i] = -coeff[i]
    cls = NovikovExponent(tuple(A))
    assert cls.in_kernel(p.normals), cls
    return cls


def _path_class(p: PolytopeSpec, path: Sequence[tuple], i: int) -> NovikovExponent:
    d = NovikovExponent.zero(p.N)
    for start, edge in path:
        _, gamma = edge.step(start)
        w = pairing(p.normals[i], gamma)
        if w:
            d = d + w * wall_curve_class(edge, p)
    return d


def shortest_path(p: PolytopeSpec, start: int, targets) -> list[tuple]:
    """Breadth-first path of bounded edges as a list of (from-vertex, edge)."""
    lat = build_face_lattice(p)
    targets = set(targets)
    prev: dict[int, Optional[tuple]] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u in targets:
            path = []
            while prev[u] is not None:
                w, e = prev[u]
                path.append((w, e))
                u = w
            return path[::-1]
        for w, e in lat.adjacency[u]:
            if w not in prev:
                prev[w] = (u, e)
                queue.append(w)
    raise NoPath(f"no path of bounded edges from v{start} to {sorted(targets)}")


def simple_paths(p: PolytopeSpec, start: int, targets) -> Iterator[list[tuple]]:
    """All simple bounded-edge paths from ``start`` ending at a target vertex."""
    lat = build_face_lattice(p)
    targets = set(targets)

    def walk(u, seen, path):
        if u in targets:
            yield list(path)
        for w, e in lat.adjacency[u]:
            if w in seen:
                continue
            seen.add(w)
            path.append((u, e))
            yield from walk(w, seen, path)
            path.pop()
            seen.discard(w)

    yield from walk(start, {start}, [])


def shift_class(p: PolytopeSpec, vertex, i: int) -> NovikovExponent:
    """Exponent d_i with S_i(1) = q^{d_i} x_i at the given vertex."""
    lat = build_face_lattice(p)
    v = lat.vertex(vertex)
    if not 0 <= i < p.N:
        raise IndexError(f"facet index {i} out of range")
    targets = [w.id for w in lat.vertices if i in w.facets]
    return _path_class(p, shortest_path(p, v.id, targets), i)


def shift_class_all_paths(p: PolytopeSpec, vertex, i: int) -> list[NovikovExponent]:
    lat = build_face_lattice(p)
    v = lat.vertex(vertex)
    targets = [w.id for w in lat.vertices if i in w.facets]
    return [_path_class(p, path, i) for path in simple_paths(p, v.id, targets)]


def check_monotone(p: PolytopeSpec) -> Fraction:
    """Monotonicity constant: c_1(A) = lambda * omega(A) on H_2."""
    K = kernel_basis(p.normals)
    if not K:
        raise NotMonotone(f"{p} has trivial H_2; monotonicity is undefined")
    lam = None
    for A in K:
        cls = NovikovExponent(A)
        c, w = cls.chern, cls.energy(p.offsets)
        if w == 0:
            raise NotMonotone(f"class {A} has zero energy and c_1 = {c}")
        ratio = Fraction(c) / w
        if lam is None:
            lam = ratio
        elif ratio != lam:
            raise NotMonotone(f"c_1/omega takes values {lam} and {ratio}")
    if lam <= 0:
        raise NotMonotone(f"monotonicity constant {lam} is not positive")
    return lam


def lift_line_bundle(base: PolytopeSpec, m: Sequence[int]) -> PolytopeSpec:
    """Polytope of the total space of O(sum m_i D_i) over a closed base."""
    if base.kind is not Kind.CLOSED:
        raise InvalidSpec("line bundles are built over a closed base")
    if len(m) != base.N:
        raise InvalidSpec(f"expected {base.N} integers m_i, got {len(m)}")
    lam_b = check_monotone(base)
    # c_1(E) = sum m_i D_i = -k [omega_B] on H_2(B)
    ks = set()
    for A in kernel_basis(base.normals):
        cls = NovikovExponent(A)
        ks.add(Fraction(-pairing(m, A)) / cls.energy(base.offsets))
    if len(ks) != 1:
        raise NotMonotone(f"c_1(E) is not proportional to [omega_B] (ratios {sorted(ks)})")
    (k,) = ks
    if not 0 < k < lam_b:
        raise NotMonotone(f"need 0 < k < lambda_B, got k = {k}, lambda_B = {lam_b}")
    normals = tuple(tuple(e) + (-mi,) for e, mi in zip(base.normals, m))
    normals += ((0,) * base.n + (1,),)
    offsets = tuple(base.offsets) + (Fraction(0),)
    name = f"{base.name or 'B'} line bundle m={list(m)}"
    E = PolytopeSpec(base.n + 1, normals, offsets, Kind.LINE_BUNDLE, name)
    lam_e = check_monotone(E)
    if lam_e != lam_b - k:
        raise NotMonotone(f"lambda_E = {lam_e} but lambda_B - k = {lam_b - k}")
    return E


def spec_from_document(doc: dict) -> PolytopeSpec:
    """Build a spec from a parsed input document (see README for the format)."""
    try:
        n = doc["n"]
        normals = doc["normals"]
        offsets = doc["offsets"]
    except KeyError as exc:
        raise InvalidSpec(f"input document is missing field {exc.args[0]!r}") from None
    if not isinstance(n, int) or not isinstance(normals, list) or not isinstance(offsets, list):
        raise InvalidSpec("fields n, normals, offsets must be an integer and two arrays")
    name = str(doc.get("name", ""))
    kind = Kind(doc.get("kind", "closed"))
    spec = PolytopeSpec(n, tuple(tuple(e) for e in normals), tuple(offsets), kind, name)
    lb = doc.get("line_bundle")
    if lb is not None:
        if "m" not in lb:
            raise InvalidSpec("line_bundle table needs an array m")
        spec = lift_line_bundle(spec, lb["m"])
        if name:
            spec = PolytopeSpec(spec.n, spec.normals, spec.offsets, spec.kind, name)
    return spec


def spec_to_document(p: PolytopeSpec) -> dict:
    return {
        "name": p.name,
        "n": p.n,
        "kind": p.kind.value,
        "normals": [list(e) for e in p.normals],
        "offsets": [str(l) for l in p.offsets],
    }
