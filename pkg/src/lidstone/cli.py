"""Command-line interface: ``lidstone <subcommand> ...``.

Every subcommand writes one JSON document (sorted keys, so reruns are
byte-identical) to stdout or ``--output``; ``--table`` additionally renders
a plain-text summary on stderr. Exit codes: 0 success, 1 usage or
validation error, 2 mathematical failure (inconsistent data, degree cap
exceeded, failed verification), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .basis import (
    DataSet, InconsistentSystemError, NoSolutionWithinCapError, NonUniqueSolutionError,
    expand, extract_data, lidstone_basis, reconstruct,
)
from .exprcalc import ExampleSpec, Expr, build_example, parse_expression, to_multipoly
from .exprcalc.parser import ExprSyntaxError
from .growth import (
    DEFAULT_GRID, GrowthParams, default_r_grid, estimate_directional_type, polya_bound,
    polya_threshold, theorem_pipeline,
)
from .exprcalc.verify import verify_data_property
from .polycore import AffinePointFrame, MultiPoly, SingularFrameError, parse_rational, random_poly

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MATH = 2
EXIT_IO = 3

DEFAULT_TOL = 1e-9
DEFAULT_NODES = 64


class UsageError(Exception):
    pass


class MathFailure(Exception):
    """A well-formed request whose mathematical answer is a failure."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for math failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [parse_rational(x) for x in text.replace(" ", "").split(",") if x != ""]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})")


def _load_function(args) -> tuple[object, int, AffinePointFrame | None]:
    """Function from --example, --expr or --expr-file, with its dimension and frame."""
    if getattr(args, "example", None) is not None:
        n = args.n
        if n is None:
            raise UsageError("--example needs -n")
        a = args.a if args.a is not None else [Fraction(0)] * n
        b = args.b if args.b is not None else [Fraction(1)] * n
        g = []
        for k, text in enumerate(args.g or []):
            i = k + 1
            arity = n - i if i < n else 1
            g.append(to_multipoly(parse_expression(text), max(arity, 1)))
        ex = build_example(ExampleSpec(args.example, n, tuple(a), tuple(b), tuple(g)))
        return ex.expr, n, ex.frame
    if getattr(args, "expr", None) is not None:
        f = parse_expression(args.expr)
    elif getattr(args, "expr_file", None) is not None:
        f = _load_expr_file(args.expr_file)
    else:
        raise UsageError("give --example, --expr or --expr-file")
    if isinstance(f, MultiPoly):
        n = args.n or f.n
        if n != f.n:
            raise UsageError("-n does not match the polynomial file")
    else:
        n = args.n or max(f.dim, 1)
        if f.dim > n:
            raise UsageError(f"expression uses x{f.dim} but -n is {n}")
    return f, n, None


def _load_expr_file(path: str):
    if path.endswith(".json"):
        data = _read_json(path)
        if isinstance(data, dict) and "terms" in data:
            return MultiPoly.from_json(data)
        if isinstance(data, dict) and "expr" in data:
            return parse_expression(str(data["expr"]))
        raise UsageError(f"{path}: expected polynomial JSON or {{\"expr\": ...}}")
    with open(path, encoding="utf-8") as fh:
        return parse_expression(fh.read())


def _load_frame(args, n: int, default: AffinePointFrame | None) -> AffinePointFrame:
    if getattr(args, "frame", None):
        frame = AffinePointFrame.from_json(_read_json(args.frame))
        if frame.n != n:
            raise UsageError(f"frame has dimension {frame.n}, expected {n}")
        return frame
    return default or AffinePointFrame.canonical(n)


def _r_grid(args):
    if args.r_count < 4 or not 0 < args.r_min < args.r_max:
        raise UsageError("need 0 < r-min < r-max and r-count >= 4")
    return default_r_grid(args.r_min, args.r_max, args.r_count)


def _seed(args) -> int:
    env = os.environ.get("LIDSTONE_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"LIDSTONE_SEED must be an integer, got {env!r}")
    return args.seed


def _emit(args, doc: dict, table: str | None = None):
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.table and table:
        sys.stderr.write(table.rstrip("\n") + "\n")


def _frame_json(frame: AffinePointFrame) -> dict:
    return frame.to_json()


# ---------------------------------------------------------------------------
# subcommands


def cmd_basis(args) -> int:
    n = args.n
    t = args.t
    if len(t) != n:
        raise UsageError(f"t has {len(t)} entries, expected {n}")
    cap = args.degree_cap if args.degree_cap is not None else sum(t) + 2 * n + 4
    if cap < sum(t) + 1:
        raise UsageError("degree cap must be at least |t| + 1")
    elem = lidstone_basis(n, t, args.i, cap)
    doc = elem.to_json()
    doc["settings"] = {"degree_cap": cap, "seed": _seed(args)}
    _emit(args, doc, f"Lambda_{{{tuple(t)},{args.i}}} = {elem.poly.to_string('z')}  (degree {elem.degree})")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    seed = _seed(args)
    settings = {"degree_bound": args.degree_bound, "seed": seed}
    if args.random_corpus:
        return _reconstruct_corpus(args, seed, settings)
    if not args.data:
        raise UsageError("give a data file or --random-corpus")
    data = DataSet.from_json(_read_json(args.data))
    if args.degree_bound is None:
        raise UsageError("--degree-bound is required")
    p = reconstruct(data, args.degree_bound)
    doc = p.to_json()
    doc["settings"] = settings
    doc["frame"] = _frame_json(data.point_frame())
    _emit(args, doc, f"P = {p.to_string('z')}")
    return EXIT_OK


def _reconstruct_corpus(args, seed: int, settings: dict) -> int:
    rng = random.Random(seed)
    rows = []
    ok = True
    for k in range(args.random_corpus):
        n = rng.choice([1, 2, 3])
        p = random_poly(rng, n, args.max_degree)
        deg = p.degree if p.degree is not None else 0
        bound = deg if args.degree_bound is None else max(deg, args.degree_bound)
        q = reconstruct(extract_data(p, max_norm=bound), bound)
        rows.append({"n": n, "degree": p.degree, "pass": q == p})
        ok = ok and q == p
    settings = dict(settings, random_corpus=args.random_corpus, max_degree=args.max_degree)
    doc = {"settings": settings, "pass": ok, "cases": rows}
    _emit(args, doc, f"round trip: {sum(r['pass'] for r in rows)}/{len(rows)} exact")
    if not ok:
        raise MathFailure("round trip failed")
    return EXIT_OK


def _verify_table(report) -> str:
    lines = [f"{'t':>16} {'i':>2}  {'value':>28}  pass"]
    for e in report.entries:
        v = e.to_json()["value"]
        lines.append(f"{str(tuple(e.t)):>16} {e.i:>2}  {str(v):>28}  {'ok' if e.passed else 'FAIL'}")
    lines.append(f"{report.predicate}: {'PASS' if report.passed else 'FAIL'} "
                 f"({len(report.entries) - len(report.failures())}/{len(report.entries)})")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    f, n, frame = _load_function(args)
    frame = _load_frame(args, n, frame)
    report = verify_data_property(f, frame, args.max_norm, predicate=args.predicate, tol=args.tol,
                                  restrict_to_T=not args.all_even, method=args.method,
                                  scale_tol=not args.absolute_tol, radius=args.radius,
                                  nodes=args.nodes)
    doc = report.to_json()
    doc["function"] = f.to_text() if isinstance(f, Expr) else f.to_json()
    doc["frame"] = _frame_json(frame)
    doc["settings"] = {"tol": args.tol, "nodes": args.nodes, "radius": args.radius,
                       "method": args.method, "scale_tol": not args.absolute_tol,
                       "seed": _seed(args)}
    if report.failures():
        doc["witnesses"] = [e.to_json() for e in report.failures()]
    _emit(args, doc, _verify_table(report))
    return EXIT_OK if report.passed else EXIT_MATH


def cmd_growth(args) -> int:
    f, n, frame = _load_function(args)
    frame = _load_frame(args, n, frame)
    report = theorem_pipeline(f, frame, _r_grid(args), grid=args.grid, tol=args.tol)
    doc = report.to_json()
    doc["function"] = f.to_text() if isinstance(f, Expr) else f.to_json()
    doc["frame"] = _frame_json(frame)
    doc["settings"]["seed"] = _seed(args)
    types = ", ".join(f"{d['type']:.6g}" for d in report.type_estimates)
    table = "\n".join([
        f"growth condition : {report.condition_1_1.verdict} (margin {report.condition_1_1.margin:.6g})",
        f"type < pi        : {report.condition_1_3['verdict']} (estimates {types})",
        f"order estimate   : {report.order_estimate:.6g}",
        f"threshold T0     : {report.polya_T0}",
    ])
    _emit(args, doc, table)
    return EXIT_OK


def cmd_expand(args) -> int:
    f, n, _ = _load_function(args)
    ex = expand(f, n, args.truncation)
    doc = ex.to_json()
    doc["function"] = f.to_text() if isinstance(f, Expr) else f.to_json()
    doc["settings"] = {"truncation": args.truncation, "grid": "uniform on [0,1]^n",
                       "type_tol": args.type_tol, "seed": _seed(args)}
    warnings = []
    for k in range(n):
        w = [0] * n
        w[k] = 1
        try:
            d = estimate_directional_type(f, w)
        except (OverflowError, ArithmeticError):
            continue
        if d.type >= (1 - args.type_tol) * math.pi:
            warnings.append(f"type not < pi in direction e_{k + 1} (estimate {d.type:.6g}); "
                            "the expansion need not represent the function")
    doc["warnings"] = warnings
    for msg in warnings:
        sys.stderr.write(f"warning: {msg}\n")
    rows = [f"{str(tuple(tm.t)):>14} {tm.i:>2}  {str(c['coefficient']):>24}"
            for tm, c in zip(ex.terms, doc["terms"])]
    rows.append(f"residual on [0,1]^n: {ex.residual:.3e}")
    _emit(args, doc, "\n".join(rows))
    return EXIT_OK


def cmd_threshold(args) -> int:
    params = GrowthParams(args.A, args.eta)
    T0 = polya_threshold(params)
    doc = {"A": args.A, "eta": args.eta, "T0": T0, "bound_at_T0": polya_bound(T0, args.A, args.eta)}
    if T0 - 1 > args.A:
        doc["bound_at_T0_minus_1"] = polya_bound(T0 - 1, args.A, args.eta)
    doc["settings"] = {"seed": _seed(args)}
    _emit(args, doc, f"T0 = {T0}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(p):
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.add_argument("--table", action="store_true", help="also print a text table on stderr")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized corpora "
                   "(LIDSTONE_SEED overrides; default 0)")


def _add_function(p, with_example: bool = True):
    g = p.add_mutually_exclusive_group()
    if with_example:
        g.add_argument("--example", type=int, choices=(1, 2, 3), help="example family")
    g.add_argument("--expr", help="expression text, e.g. 'sin(pi*x1)'")
    g.add_argument("--expr-file", help="text file with an expression, or JSON "
                   "(polynomial JSON or {\"expr\": ...})")
    p.add_argument("-n", type=int, help="dimension")
    if with_example:
        p.add_argument("--a", type=_rational_list, help="example parameters a (default 0,...,0)")
        p.add_argument("--b", type=_rational_list, help="example parameters b (default 1,...,1)")
        p.add_argument("--g", action="append", help="polynomial g_i as an expression "
                       "(repeat for g_1, g_2, ...; default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lidstone", description="Multivariate Lidstone interpolation toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", help="basis polynomial dual to an admissible pair")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-t", type=_int_list, required=True, help="multi-index, e.g. 2,0")
    p.add_argument("-i", type=int, required=True, help="point index 0..n")
    p.add_argument("--degree-cap", type=int, help="largest degree tried (default |t| + 2n + 4)")
    _add_common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("reconstruct", help="polynomial from admissible data")
    p.add_argument("data", nargs="?", help="DataSet JSON file")
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--random-corpus", type=int, default=0, metavar="COUNT",
                   help="instead of a file, round-trip COUNT seeded random polynomials")
    p.add_argument("--max-degree", type=int, default=6, help="degree of corpus polynomials (default 6)")
    _add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="check that admissible data vanish or are integers")
    _add_function(p)
    p.add_argument("--frame", help="frame JSON file (default: the example frame or e_0..e_n)")
    p.add_argument("--max-norm", type=int, default=8)
    p.add_argument("--predicate", choices=("zero", "integer"), default="zero")
    p.add_argument("--all-even", action="store_true",
                   help="check every (t, i) with |t| even, not only admissible pairs")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--absolute-tol", action="store_true", help="do not scale tol by t!")
    p.add_argument("--method", choices=("auto", "numeric", "contour"), default="auto")
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="contour nodes per variable")
    p.add_argument("--radius", type=float, default=1.0, help="contour radius")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("growth", help="growth, type and threshold diagnostics")
    _add_function(p)
    p.add_argument("--frame", help="frame JSON file")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="torus samples per variable")
    p.add_argument("--r-min", type=float, default=1.0)
    p.add_argument("--r-max", type=float, default=200.0)
    p.add_argument("--r-count", type=int, default=40)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_common(p)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("expand", help="truncated expansion at the canonical points")
    _add_function(p, with_example=False)
    p.add_argument("-T", "--truncation", type=int, required=True)
    p.add_argument("--type-tol", type=float, default=0.05,
                   help="warn when a type estimate exceeds (1 - type_tol) pi")
    _add_common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("threshold", help="integer-value threshold T0 for (A, eta)")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MathFailure, NoSolutionWithinCapError, InconsistentSystemError,
            NonUniqueSolutionError, SingularFrameError, ArithmeticError) as exc:
        sys.stderr.write(f"lidstone: {exc}\n")
        return EXIT_MATH
    except OSError as exc:
        sys.stderr.write(f"lidstone: {exc}\n")
        return EXIT_IO
    except (UsageError, ExprSyntaxError, ValueError, TypeError, KeyError) as exc:
        sys.stderr.write(f"lidstone: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
