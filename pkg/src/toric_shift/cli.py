"""Command-line front end: ``toric-shift <command> --input polytope.toml ...``.

Exit status is 0 on success, 1 on a domain error (the error class is named
on stderr) and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Optional

from .eqring import EqRing
from .errors import DocumentError, InputError, InvalidSpec, ToricError, UsageError
from .operators import (
    connection_apply,
    determinant,
    operator_apply,
    seidel_sequence_matrix,
    sh_presentation,
    sh_rank_nonequivariant,
    shift_operator,
)
from .polytope import (
    PolytopeSpec,
    build_face_lattice,
    check_monotone,
    primitive_sets,
    spec_from_document,
    spec_to_document,
)
from .presentation import Presentation
from .verify import run_verification

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

COMMANDS = ("fan", "presentation", "reduce", "diff", "connection", "shift", "seidel-matrix", "sh", "verify")


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def read_document(path: str) -> dict:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    text = raw.decode("utf-8", errors="replace")
    if p.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: {exc}") from None
    else:
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise DocumentError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top level must be a table")
    return doc


def load_input(path: str) -> tuple[PolytopeSpec, Optional[str]]:
    """Polytope spec plus the vertex recorded in a presentation document, if any."""
    doc = read_document(path)
    vertex = None
    if "spec" in doc and isinstance(doc["spec"], dict):
        vertex = doc.get("vertex")
        doc = doc["spec"]
    try:
        return spec_from_document(doc), vertex
    except (ValueError, TypeError) as exc:
        raise InvalidSpec(f"{path}: {exc}") from None


def default_vertex(spec: PolytopeSpec) -> int:
    """Vertex with lexicographically least coordinates."""
    lat = build_face_lattice(spec)
    return min(lat.vertices, key=lambda v: v.coords).id


def resolve_vertex(spec: PolytopeSpec, ref: Optional[str]) -> int:
    if ref is None:
        return default_vertex(spec)
    lat = build_face_lattice(spec)
    try:
        return lat.vertex(int(ref) if ref.isdigit() else ref).id
    except KeyError:
        names = ", ".join(v.name for v in lat.vertices)
        raise UsageError(f"unknown vertex {ref!r}; vertices are {names}") from None


def split_basis(text: str) -> list[str]:
    """Split a comma list at bracket depth zero (q^[a,b] keeps its commas)."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    items = [p.strip() for p in parts]
    if any(not p for p in items):
        raise UsageError(f"empty entry in basis list {text!r}")
    return items


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

class Job:
    def __init__(self, args):
        self.args = args
        self.spec, recorded = load_input(args.input)
        ref = args.vertex if args.vertex is not None else recorded
        self.vertex = resolve_vertex(self.spec, ref)
        self._pres = None

    @property
    def pres(self) -> Presentation:
        if self._pres is None:
            self._pres = Presentation(self.spec, self.vertex)
        return self._pres

    def expr(self):
        if self.args.expr is None:
            raise UsageError(f"{self.args.command} needs --expr")
        return self.pres.ring.parse(self.args.expr)

    def facet(self) -> int:
        if self.args.facet is None:
            raise UsageError(f"{self.args.command} needs --facet")
        if not 0 <= self.args.facet < self.spec.N:
            raise UsageError(f"facet {self.args.facet} out of range 0..{self.spec.N - 1}")
        return self.args.facet

    def basis(self):
        if self.args.basis is None:
            return None
        ring = self.pres.ring
        return self.pres.validate_basis([ring.parse(t) for t in split_basis(self.args.basis)])


def cmd_fan(job: Job) -> tuple[str, dict]:
    spec = job.spec
    lat = build_face_lattice(spec)
    try:
        lam = check_monotone(spec)
    except ToricError as exc:
        lam = None
        lam_text = f"not monotone ({type(exc).__name__}: {exc})"
    else:
        lam_text = str(lam)
    ring = EqRing(spec)
    prims = primitive_sets(spec)
    doc = {
        "spec": spec_to_document(spec),
        "vertices": [
            {"name": v.name, "facets": list(v.facets), "coords": [str(c) for c in v.coords]}
            for v in lat.vertices
        ],
        "edges": [
            {
                "facets": list(e.facets),
                "endpoints": [lat.vertices[k].name for k in e.endpoints],
                "direction": list(e.direction),
                "length": None if e.length is None else str(e.length),
            }
            for e in lat.edges
        ],
        "primitive_sets": [list(I) for I in prims],
        "kernel": [list(K) for K in ring.kernel],
        "monotonicity": None if lam is None else str(lam),
    }
    lines = [f"{spec}  (n={spec.n}, N={spec.N}, {spec.kind.value})"]
    lines.append("facets:")
    for i, (e, l) in enumerate(zip(spec.normals, spec.offsets)):
        lines.append(f"  F{i}: <{list(e)}, y> >= {l}")
    lines.append("vertices:")
    for v in lat.vertices:
        coords = "(" + ", ".join(str(c) for c in v.coords) + ")"
        lines.append(f"  {v.name} = {coords} on facets {list(v.facets)}")
    lines.append("edges:")
    for e in lat.edges:
        ends = " -- ".join(lat.vertices[k].name for k in e.endpoints)
        if e.is_ray:
            lines.append(f"  F{list(e.facets)}: ray from {ends} along {list(e.direction)}")
        else:
            lines.append(f"  F{list(e.facets)}: {ends}, direction {list(e.direction)}, length {e.length}")
    lines.append("primitive sets: " + ", ".join(str(list(I)) for I in prims))
    lines.append("H_2 basis: " + ", ".join(str(list(K)) for K in ring.kernel))
    lines.append(f"monotonicity constant: {lam_text}")
    return "\n".join(lines), doc


def cmd_presentation(job: Job):
    pres = job.pres
    doc = pres.to_document()
    doc["fingerprint"] = pres.fingerprint()
    return pres.pretty() + f"\nfingerprint {doc['fingerprint']}", doc


def cmd_reduce(job: Job):
    e = job.expr()
    out = job.pres.reduce(e)
    return str(out), {"input": str(e), "reduced": str(out)}


def cmd_diff(job: Job):
    e = job.expr()
    j = job.facet()
    out = job.pres.differentiate(j, e)
    return str(out), {"input": str(e), "direction": j, "derivative": str(out)}


def cmd_connection(job: Job):
    e = job.expr()
    j = job.facet()
    out = connection_apply(j, e, job.pres)
    return str(out), {"input": str(e), "direction": j, "value": str(out)}


def _table_inputs(pres: Presentation, max_x_degree: int = 2):
    # every monomial in x_0..x_{N-1} of degree <= 2
    ring = pres.ring
    out = []
    for k in range(max_x_degree + 1):
        for combo in combinations_with_replacement(range(pres.spec.N), k):
            m = ring.one
            for i in combo:
                m = m * ring.x(i)
            out.append(m)
    return out


def cmd_shift(job: Job):
    i = job.facet()
    op = shift_operator(i, job.pres, job.basis())
    if job.args.expr is not None:
        e = job.expr()
        out = operator_apply(op, e)
        return str(out), {"facet": i, "input": str(e), "value": str(out)}
    d = job.pres.shift_class(i)
    table = [(str(m), str(operator_apply(op, m))) for m in _table_inputs(job.pres)]
    lines = [f"S{i} at {job.pres.vertex.name}: S(1) = q^d x{i}, d = {list(d.vector)}"]
    lines += [f"  S({m}) = {v}" for m, v in table]
    lines.append("matrix:")
    lines.append(op.pretty())
    doc = op.to_document()
    doc["facet"] = i
    doc["shift_class"] = list(d.vector)
    doc["table"] = [{"input": m, "value": v} for m, v in table]
    return "\n".join(lines), doc


def cmd_seidel_matrix(job: Job):
    i = job.facet()
    r = job.args.r if job.args.r is not None else 1
    if r < 1:
        raise UsageError("--r must be at least 1")
    op = seidel_sequence_matrix(i, r, job.pres, job.basis())
    det = determinant(op)
    doc = op.to_document()
    doc.update({"facet": i, "r": r, "determinant": str(det)})
    return op.pretty() + f"\ndeterminant {det}", doc


def cmd_sh(job: Job):
    text = sh_presentation(job.pres)
    rk = sh_rank_nonequivariant(job.pres)
    return f"{text}\nrank {rk}", {"presentation": text, "rank": rk}


def cmd_verify(job: Job):
    rep = run_verification(job.spec, job.vertex, max_degree=job.args.max_degree, pres=job.pres)
    return rep.pretty(), rep.to_document(), rep.passed


HANDLERS = {
    "fan": cmd_fan,
    "presentation": cmd_presentation,
    "reduce": cmd_reduce,
    "diff": cmd_diff,
    "connection": cmd_connection,
    "shift": cmd_shift,
    "seidel-matrix": cmd_seidel_matrix,
    "sh": cmd_sh,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toric-shift",
        description="Equivariant quantum cohomology, shift operators and SH of toric manifolds.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="polytope document (TOML or JSON)")
    parser.add_argument("--vertex", help="vertex name v<k> (default: lexicographically least)")
    parser.add_argument("--facet", type=int, help="facet index i (shift) or direction j (diff, connection)")
    parser.add_argument("--expr", help="expression, e.g. 'x1*(x1-u0)*x2'")
    parser.add_argument("--basis", help="comma-separated basis expressions, e.g. '1,x2'")
    parser.add_argument("--r", type=int, help="sequence index for seidel-matrix (default 1)")
    parser.add_argument(
        "--format", default="pretty", choices=("pretty", "structured", "json"),
        help="pretty text or structured JSON ('json' is an alias)",
    )
    parser.add_argument("--max-degree", type=int, default=6, help="verification sample bound")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        job = Job(args)
        result = HANDLERS[args.command](job)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ToricError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text, doc = result[0], result[1]
    ok = result[2] if len(result) > 2 else True
    if args.format == "pretty":
        print(text)
    else:
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
