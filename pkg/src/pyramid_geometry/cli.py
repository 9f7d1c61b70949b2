"""Command-line entry point: ``verify``, ``trisect``, ``triples`` and ``run``.

Exit status: 0 when every check passes, 1 when checks ran and something
failed, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .classical import consecutive_leg_triples, trisect_iterative
from .dsl import DslError, parse, render_svg
from .dsl.evaluator import evaluate
from .geom import Angle, GeometryError, dms
from .metrology import (
    SchemaError,
    bundled_claims,
    bundled_dataset,
    load_claims,
    load_dataset,
    run_suite,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_angle(text: str) -> Angle:
    """Decimal degrees (``54.46222``) or ``d:m:s`` (``54:27:44``)."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) > 3:
                raise ValueError
            d, m, s = (parts + ["0", "0"])[:3]
            return dms(int(d), int(m), float(s))
        return Angle.from_degrees(float(text)) if float(text) != 360.0 else Angle(0.0)
    except (ValueError, GeometryError):
        raise UsageError(f"invalid angle {text!r}: use decimal degrees or d:m:s") from None


def _decimal_degrees(text: str) -> float:
    if ":" in text:
        return parse_angle(text).degrees
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"invalid angle {text!r}: use decimal degrees or d:m:s") from None


# --- subcommands ----------------------------------------------------------------


def cmd_verify(args, out) -> int:
    try:
        dataset = load_dataset(args.dataset) if args.dataset else bundled_dataset()
        claims = load_claims(args.claims) if args.claims else bundled_claims()
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.claim:
        known = {c.id for c in claims}
        unknown = [c for c in args.claim if c not in known]
        if unknown:
            print(f"error: unknown claim id(s): {', '.join(unknown)}", file=sys.stderr)
            return EXIT_USAGE
        claims = [c for c in claims if c.id in set(args.claim)]
    report = run_suite(claims, dataset)
    if args.format == "json":
        out.write(report.to_json())
    elif args.format == "csv":
        out.write(report.to_csv())
    else:
        out.write(report.to_text())
    return EXIT_OK if report.all_passed else EXIT_FAIL


_COLUMNS = ("cycle", "IXn", "CXn", "height Tn", "proj. ATn", "third (deg)")


def cmd_trisect(args, out) -> int:
    deg = _decimal_degrees(args.angle)
    if not 0 < deg < 180:
        print(f"error: angle must lie strictly between 0 and 180 degrees, got {args.angle}", file=sys.stderr)
        return EXIT_USAGE
    theta = parse_angle(args.angle)
    if args.unit <= 0 or args.eps <= 0 or (args.iters is not None and args.iters < 0):
        print("error: --unit and --eps must be positive, --iters non-negative", file=sys.stderr)
        return EXIT_USAGE
    if args.iters is None:
        trace = trisect_iterative(theta, args.unit, args.eps, args.max_iter)
    else:
        trace = trisect_iterative(theta, args.unit, args.eps, args.iters, stop_early=False)

    if args.format == "json":
        out.write(json.dumps(trace.to_dict(), indent=2) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "ix", "cx", "height_t", "proj_at", "third_deg"])
        for r in trace.rows:
            w.writerow([r.label] + [f"{v:.5f}" for v in (r.ix, r.cx, r.height_t, r.proj_at, r.third_deg)])
        out.write(buf.getvalue())
    else:
        out.write(f"trisection of {theta.degrees:.5f} deg, unit {args.unit:g}\n")
        out.write("".join(f"{c:>12}" for c in _COLUMNS) + "\n")
        for r in trace.rows:
            out.write(f"{r.label:>12}" + "".join(f"{v:12.5f}" for v in (r.ix, r.cx, r.height_t, r.proj_at, r.third_deg)) + "\n")
        status = "converged" if trace.converged else "not converged"
        out.write(f"third {trace.final_third.degrees:.6f} deg (theta/3 = {theta.degrees / 3:.6f}), {status}\n")
    if args.iters is not None:
        return EXIT_OK
    return EXIT_OK if trace.converged else EXIT_FAIL


def cmd_triples(args, out) -> int:
    if args.count < 1:
        print("error: --count must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    for t in consecutive_leg_triples(args.count):
        out.write(f"{t.a},{t.b},{t.c}\n")
    return EXIT_OK


def _read_script(name: str) -> tuple[str, str]:
    path = Path(name)
    if path.is_file():
        return path.read_text(encoding="utf-8"), name
    bundled = resources.files("pyramid_geometry").joinpath("data").joinpath("scripts").joinpath(path.name)
    if not path.exists() and bundled.is_file():
        return bundled.read_text(encoding="utf-8"), name
    raise OSError(f"cannot read script {name}")


def cmd_run(args, out) -> int:
    try:
        source, filename = _read_script(args.script)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = evaluate(parse(source, filename), filename=filename)
    except DslError as exc:
        print(exc.format(filename), file=sys.stderr)
        return EXIT_USAGE
    for a in result.assertions:
        mark = "pass" if a.passed else "FAIL"
        out.write(f"{filename}:{a.line}: {mark} {a.source}  (actual {a.actual:.9g}, expected {a.expected:.9g})\n")
    passed = sum(a.passed for a in result.assertions)
    out.write(f"{passed}/{len(result.assertions)} assertions passed\n")
    if args.render:
        Path(args.render).write_text(render_svg(result.env, title=Path(filename).name), encoding="utf-8")
    return EXIT_OK if result.passed else EXIT_FAIL


# --- wiring ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pyramid-geometry", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="evaluate the claim registry against a dataset")
    v.add_argument("--dataset", help="dataset JSON (default: bundled)")
    v.add_argument("--claims", help="claims JSON (default: bundled)")
    v.add_argument("--claim", action="append", default=[], help="only this claim id (repeatable)")
    v.add_argument("--format", choices=("text", "csv", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("trisect", help="iterative trisection table")
    t.add_argument("--angle", required=True, help="decimal degrees or d:m:s")
    t.add_argument("--unit", type=float, default=100.0, help="length AC (default 100)")
    t.add_argument("--iters", type=int, help="run exactly this many iterations after row S")
    t.add_argument("--eps", type=float, default=1e-7, help="stop when the estimate moves less than this (degrees)")
    t.add_argument("--max-iter", type=int, default=100)
    t.add_argument("--format", choices=("text", "csv", "json"), default="text")
    t.set_defaults(func=cmd_trisect)

    tr = sub.add_parser("triples", help="consecutive-leg Pythagorean triples")
    tr.add_argument("--count", type=int, required=True)
    tr.set_defaults(func=cmd_triples)

    r = sub.add_parser("run", help="evaluate a .geo construction script")
    r.add_argument("script", help="path, or the name of a bundled script")
    r.add_argument("--render", metavar="OUT.svg", help="write the construction as SVG")
    r.set_defaults(func=cmd_run)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
