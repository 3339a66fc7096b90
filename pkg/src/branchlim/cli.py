"""Command-line front end: input DSL, command dispatch and reports.

Input files are ``;``-separated statements with ``#`` line comments::

    ring Q[t][x0,x1,x2];        # optional [t] block marks the parameter
    weights x0=1,x1=1,x2=1;     # optional, default 1
    ideal x1^2 - t*x0*x2;       # comma-separated generators
    map T0=x0, T1=x1 + x2;      # optional structure map from Q[t][T0,..]
    center x, y;                # bnc: the ideal I inside Q
    element y;                  # bnc: element for the Samuel order
    forest [0,[[1,[]],[1,[]]]]; # forest and sr inputs

Exit codes: 0 success, 1 usage or input error, 2 certified mathematical
failure (incomplete decomposition, non-generic section, pipeline failure).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import __version__
from .algebra import PresentedAlgebra
from .decompose import DecompositionError
from .exact_arith import binomial_poly, format_rational, mpq
from .forest import (
    Forest,
    ForestError,
    compute_forest,
    forest_degree_sequence,
    forest_hilbert_polynomial,
    kollar_double,
    stanley_reisner_from_forest,
    validate_forest_labels,
)
from .groebner import Ideal
from .hilbert import HilbertError, hilbert_polynomial_of_fiber, hilbert_series, json_rational, poly_text
from .limits import (
    DEFAULT_MAX_ROUNDS,
    LimitError,
    balanced_normal_cone,
    branch_limit,
    further_base_change_stability,
    hilbert_limit,
    k_equivalence_data,
    make_family,
    samuel_order,
)
from .multipoly import ParseError, Poly, PolyRing, RingMap, parse_poly, to_text

SCHEMA = "branchlim/1"
COMMANDS = ("hilbert", "forest", "limit-hilbert", "limit-branch", "bnc", "kequiv", "double", "sr", "stability")


class UsageError(ValueError):
    """Bad input file or command/input mismatch (exit code 1)."""


# --------------------------------------------------------------------------
# input DSL


@dataclass
class ParsedInput:
    ring: PolyRing | None = None
    ideal: Ideal | None = None
    structure_map: RingMap | None = None
    center: Ideal | None = None
    element: Poly | None = None
    forest: Forest | None = None

    def require_ring(self) -> PolyRing:
        if self.ring is None:
            raise UsageError("input declares no ring")
        return self.ring

    def require_ideal(self) -> Ideal:
        ring = self.require_ring()
        return self.ideal if self.ideal is not None else Ideal(ring, [])

    def family(self):
        ring = self.require_ring()
        if ring.base_parameter is None:
            raise UsageError("this command needs a family: declare the ring as Q[t][...]")
        return make_family(self.require_ideal(), self.structure_map)

    def algebra(self) -> PresentedAlgebra:
        ideal = self.require_ideal()
        if ideal.ring.base_parameter is not None:
            raise UsageError("expected a branchvariety, not a family: drop the [t] block")
        if self.structure_map is None:
            return PresentedAlgebra.embedded(ideal)
        return PresentedAlgebra(ideal.ring, ideal, self.structure_map)


def _location(text: str, pos: int) -> str:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


def _fail(text: str, pos: int, message: str):
    raise UsageError(f"{message} ({_location(text, pos)})")


def _strip_comments(text: str) -> str:
    # blank out comments so that offsets stay valid
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def _statements(text: str):
    start = 0
    depth = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == ";" and depth <= 0:
            yield start, text[start:i]
            start = i + 1
            depth = 0
    if text[start:].strip():
        yield start, text[start:]


def _split_commas(body: str, offset: int):
    """Split on top-level commas; yields ``(offset, piece)``."""
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            yield offset + start, body[start:i]
            start = i + 1
    yield offset + start, body[start:]


def _polys(text: str, body: str, offset: int, ring: PolyRing) -> list:
    out = []
    if not body.strip():
        return out
    for pos, piece in _split_commas(body, offset):
        if not piece.strip():
            _fail(text, pos, "empty generator")
        try:
            out.append(parse_poly(piece, ring))
        except ParseError as exc:
            where = pos + (exc.position or 0)
            _fail(text, where, str(exc).split(" at position")[0])
    return out


_RING = re.compile(r"\s*Q\s*(?:\[\s*([A-Za-z_]\w*)\s*\])?\s*\[([^\]]*)\]\s*$")


def parse_input(text: str) -> ParsedInput:
    """Parse the input DSL; errors carry line and column."""
    clean = _strip_comments(text)
    out = ParsedInput()
    weights: dict = {}
    pending: list = []
    for start, stmt in _statements(clean):
        m = re.match(r"\s*([A-Za-z]+)", stmt)
        if not m:
            if stmt.strip():
                _fail(text, start + len(stmt) - len(stmt.lstrip()), "expected a statement keyword")
            continue
        key = m.group(1)
        body = stmt[m.end():]
        offset = start + m.end()
        if key == "ring":
            rm = _RING.match(body)
            if not rm:
                _fail(text, offset, "malformed ring declaration, expected Q[t][x0,..] or Q[x0,..]")
            names = tuple(v.strip() for v in rm.group(2).split(",") if v.strip())
            if not names:
                _fail(text, offset, "ring has no variables")
            param = rm.group(1)
            variables = ((param,) if param else ()) + names
            pending = [variables, param]
            try:
                out.ring = PolyRing(variables, tuple(0 if v == param else 1 for v in variables), param)
            except ValueError as exc:
                _fail(text, offset, str(exc))
        elif key == "weights":
            if out.ring is None:
                _fail(text, start, "weights before ring")
            if out.ideal is not None or out.center is not None or out.structure_map is not None:
                _fail(text, start, "weights must come before polynomials")
            for pos, piece in _split_commas(body, offset):
                wm = re.match(r"\s*([A-Za-z_]\w*)\s*=\s*(\d+)\s*$", piece)
                if not wm:
                    _fail(text, pos, "expected name=weight")
                if wm.group(1) not in out.ring.variables or wm.group(1) == out.ring.base_parameter:
                    _fail(text, pos, f"unknown variable {wm.group(1)!r}")
                weights[wm.group(1)] = int(wm.group(2))
            variables, param = pending
            try:
                out.ring = PolyRing(
                    variables,
                    tuple(0 if v == param else weights.get(v, 1) for v in variables),
                    param,
                )
            except ValueError as exc:
                _fail(text, offset, str(exc))
        elif key in ("ideal", "center", "element"):
            if out.ring is None:
                _fail(text, start, f"{key} before ring")
            gens = _polys(text, body, offset, out.ring)
            if key == "ideal":
                out.ideal = Ideal(out.ring, gens)
            elif key == "center":
                out.center = Ideal(out.ring, gens)
            else:
                if len(gens) != 1:
                    _fail(text, offset, "element takes exactly one polynomial")
                out.element = gens[0]
        elif key == "map":
            if out.ring is None:
                _fail(text, start, "map before ring")
            names, bodies = [], []
            for pos, piece in _split_commas(body, offset):
                mm = re.match(r"\s*([A-Za-z_]\w*)\s*=", piece)
                if not mm:
                    _fail(text, pos, "expected name=polynomial")
                names.append(mm.group(1))
                bodies.append((pos + mm.end(), piece[mm.end():]))
            param = out.ring.base_parameter
            src_names = ((param,) if param else ()) + tuple(names)
            src = PolyRing(src_names, tuple(0 if v == param else 1 for v in src_names), param)
            images = {param: param} if param else {}
            for name, (pos, piece) in zip(names, bodies):
                images[name] = _polys(text, piece, pos, out.ring)[0]
            out.structure_map = RingMap.from_dict(src, out.ring, images)
        elif key == "forest":
            try:
                out.forest = Forest.from_nested(json.loads(body))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                _fail(text, offset, f"malformed forest: {exc}")
        else:
            _fail(text, start + len(stmt) - len(stmt.lstrip()), f"unknown statement {key!r}")
    return out


# --------------------------------------------------------------------------
# jobs


@dataclass
class Job:
    command: str
    input_path: str = "-"
    seed: int = 0
    degree_bound: int | None = None
    output_format: str = "json"
    max_rounds: int = DEFAULT_MAX_ROUNDS
    stability_degrees: list = field(default_factory=lambda: [2, 3, 5])

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "text"):
            raise UsageError(f"unknown format {self.output_format!r}")


def _require_homogeneous(ideal: Ideal):
    for g in ideal.generators:
        if not g.is_homogeneous():
            raise UsageError(f"non-homogeneous generator: {to_text(g)}")


def _hilbert(data) -> dict:
    return data.to_json()


def _forest_report(forest: Forest) -> dict:
    return {"forest": forest.to_json()}


def run(job: Job, text: str) -> dict:
    """Execute ``job`` on input ``text`` and return the report (without schema tag)."""
    parsed = parse_input(text)
    cmd = job.command
    if cmd in ("forest", "sr") and parsed.forest is not None:
        F = parsed.forest
        if cmd == "sr":
            ideal = stanley_reisner_from_forest(F)
            back = compute_forest(ideal, job.seed)
            return {
                "ring": ideal.ring.describe(),
                "ideal": [to_text(g) for g in ideal.generators],
                "forest": back.to_json(),
                "round_trip": back == F.relabel(1),
            }
        return {
            "forest": F.to_json(),
            "hilbert_polynomial": [json_rational(c) for c in forest_hilbert_polynomial(F)],
            "degree_sequence": forest_degree_sequence(F).b,
            "violations": validate_forest_labels(F),
        }
    if cmd == "sr":
        raise UsageError("sr needs a forest statement")
    if cmd == "hilbert":
        ideal = parsed.require_ideal()
        _require_homogeneous(ideal)
        if ideal.ring.base_parameter is not None:
            F = parsed.family()
            return {
                "generic": _hilbert(hilbert_polynomial_of_fiber(F, "generic")),
                "special": _hilbert(hilbert_polynomial_of_fiber(F, "special")),
            }
        return _hilbert(hilbert_series(ideal))
    if cmd == "forest":
        X = parsed.algebra()
        _require_homogeneous(X.ideal)
        return _forest_report(compute_forest(X, job.seed))
    if cmd == "double":
        Z = parsed.require_ideal()
        if Z.ring.base_parameter is not None:
            raise UsageError("double expects Z in projective space, not a family")
        _require_homogeneous(Z)
        return kollar_double(Z, job.seed).to_json()
    if cmd == "bnc":
        Q = parsed.require_ideal()
        if parsed.center is None:
            raise UsageError("bnc needs a center statement")
        report = balanced_normal_cone(Q, parsed.center, job.seed, job.max_rounds).to_json()
        if parsed.element is not None:
            val = samuel_order(Q, parsed.center, parsed.element)
            report["samuel_order"] = {
                "element": to_text(parsed.element),
                "value": None if val.infinite else format_rational(mpq(val.value.numerator, val.value.denominator)),
                "stabilized": val.stabilized,
                "orders": val.orders,
                "infinite": val.infinite,
            }
        return report
    F = parsed.family()
    if cmd == "limit-hilbert":
        limit = hilbert_limit(F)
        out = {"ideal": [to_text(g) for g in limit.groebner()]}
        if all(g.is_homogeneous() for g in F.ideal.generators):
            out["hilbert"] = _hilbert(hilbert_series(limit))
        return out
    _require_homogeneous(F.ideal)
    if cmd == "limit-branch":
        return branch_limit(F, job.seed, job.max_rounds, with_forest=True).to_json()
    if cmd == "kequiv":
        same, bound = k_equivalence_data(F, job.degree_bound, job.seed)
        return {"degree_bound": bound, "k_equivalent": same}
    if cmd == "stability":
        report = branch_limit(F, job.seed, job.max_rounds, with_forest=True)
        checks = {str(k): further_base_change_stability(report, k, job.seed) for k in job.stability_degrees}
        return {"base_change_degree": report.base_change_degree, "stable": checks}
    raise UsageError(f"unknown command {cmd!r}")


# --------------------------------------------------------------------------
# output


def binomial_form(coeffs) -> str:
    """Write ``P`` in the basis ``C(d+k, k)``, e.g. ``C(d+2,2)`` for the plane."""
    poly = [mpq(c) for c in coeffs]
    while poly and poly[-1] == 0:
        poly.pop()
    if not poly:
        return "0"
    parts = []
    while poly:
        k = len(poly) - 1
        basis = binomial_poly(k, k).coeffs
        a = poly[-1] / basis[-1]
        poly = [p - a * (basis[i] if i < len(basis) else 0) for i, p in enumerate(poly)]
        while poly and poly[-1] == 0:
            poly.pop()
        term = "1" if k == 0 else f"C(d+{k},{k})"
        if a == 1:
            parts.append(("+", term))
        elif a == -1:
            parts.append(("-", term))
        else:
            mag = format_rational(abs(a))
            parts.append(("-" if a < 0 else "+", mag if k == 0 else f"{mag}*{term}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _text_lines(report, indent: str = ""):
    for key, value in report.items():
        if isinstance(value, dict):
            yield f"{indent}{key}:"
            yield from _text_lines(value, indent + "  ")
        elif key == "polynomial" and isinstance(value, list):
            coeffs = [mpq(c) if not isinstance(c, str) else mpq(*map(int, c.split("/"))) for c in value]
            yield f"{indent}{key}: {poly_text(coeffs)}  [{binomial_form(coeffs)}]"
        else:
            yield f"{indent}{key}: {json.dumps(value, separators=(', ', ': '))}"


def emit_report(result: dict, fmt: str = "json") -> str:
    """Serialise a report with the schema tag; deterministic for fixed input and seed."""
    tagged = {"schema": SCHEMA}
    tagged.update(result)
    if fmt == "json":
        return json.dumps(tagged, separators=(",", ":"))
    if fmt == "text":
        return "\n".join(_text_lines(tagged))
    raise UsageError(f"unknown format {fmt!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="branchlim", description="Limits of families of branchvarieties and their forests.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", default="-", help="input file, or - for stdin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree-bound", type=int, default=None, help="kequiv: compare series up to this degree")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS, help="normalization round cap")
    p.add_argument("--k", default="2,3,5", help="stability: comma-separated extra base change degrees")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        degrees = [int(k) for k in args.k.split(",") if k.strip()]
        job = Job(args.command, args.input, args.seed, args.degree_bound, args.format, args.max_rounds, degrees)
        if job.input_path == "-":
            text = sys.stdin.read()
        else:
            with open(job.input_path, encoding="utf-8") as fh:
                text = fh.read()
        report = run(job, text)
    except (DecompositionError, ForestError, LimitError, HilbertError) as exc:
        print(f"branchlim: {exc}", file=sys.stderr)
        return 2
    except (UsageError, OSError, ValueError) as exc:
        print(f"branchlim: error: {exc}", file=sys.stderr)
        return 1
    print(emit_report(report, job.output_format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
