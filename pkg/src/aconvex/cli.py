"""Command-line interface.

Every command prints ``key=value`` lines on stdout.  Failures print one
``error=<Reason> message=...`` line on stderr and exit with 2 (precondition
violated), 3 (unreadable input or bad arguments) or 4 (internal inconsistency).
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO

from . import fileio
from .errors import GeometryError, ParseError
from .geom_core import Vec2, aco_polygon
from .minkowski import certify, cycle_sum, member, minkowski_sum
from .render import render_svg
from .separation import separate

SEED_ENV = "ACONVEX_SEED"


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


class _Out:
    def __init__(self, stream: TextIO, degrees: bool):
        self.stream = stream
        self.degrees = degrees

    def kv(self, key: str, value) -> None:
        self.stream.write(f"{key}={fmt(value)}\n")

    def angle(self, key: str, value: float) -> None:
        self.kv(key, math.degrees(value) if self.degrees else value)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"bad arguments: {message}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _point(x: str, y: str) -> Vec2:
    try:
        return Vec2(float(x), float(y))
    except ValueError as exc:
        raise ParseError(f"bad coordinate: {exc}") from None


def _cmd_aco(args, out: _Out) -> None:
    def one(path):
        doc = fileio.load(path)
        return doc, aco_polygon(doc.polygon)

    if args.batch:
        paths = [ln.strip() for ln in Path(args.batch).read_text().splitlines() if ln.strip()]
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one, paths))
    else:
        results = [one(args.file)]
    for doc, rep in results:
        out.kv("name", doc.name)
        out.kv("vertices", len(doc.polygon))
        out.angle("aco", rep.value)
        out.kv("witness_start", rep.witness_start)
        out.kv("witness_end", rep.witness_end)
        out.kv("convex", rep.convex)


def _report(cert, out: _Out) -> None:
    out.kv("certified", cert.certified)
    out.angle("aco_k", cert.aco_k)
    out.angle("aco_l", cert.aco_l)
    out.angle("bound", cert.aco_lower_bound)


def _cmd_certify(args, out: _Out) -> None:
    _report(certify(fileio.load(args.a).polygon, fileio.load(args.b).polygon), out)


def _cmd_sum(args, out: _Out) -> None:
    a, b = fileio.load(args.a), fileio.load(args.b)
    if args.method == "cycle":
        res = cycle_sum(a.polygon, b.polygon, seed=args.seed)
    else:
        res = minkowski_sum(a.polygon, b.polygon)
    name = f"{a.name}+{b.name}"
    if args.output:
        fileio.save(args.output, res.polygon, name)
    _report(res.certificate, out)
    out.kv("name", name)
    out.kv("vertices", len(res.polygon))
    out.angle("aco_sum", aco_polygon(res.polygon).value)
    out.kv("method", args.method)
    if args.method == "cycle":
        out.kv("loops_removed", res.loops_removed)
        out.kv("perturbed", res.perturbed)


def _cmd_member(args, out: _Out) -> None:
    p = _point(args.x, args.y)
    out.kv("member", member(fileio.load(args.a).polygon, fileio.load(args.b).polygon, p))


def _cmd_separate(args, out: _Out) -> None:
    k = fileio.load(args.a).polygon
    w = separate(k, _point(args.x, args.y))
    out.kv("apex_x", w.apex.x)
    out.kv("apex_y", w.apex.y)
    out.angle("ray1", w.ray1_dir.angle())
    out.angle("ray2", w.ray2_dir.angle())
    out.angle("measure", w.measure)
    out.angle("required", math.pi + aco_polygon(k).value)


def _cmd_render(args, out: _Out) -> None:
    docs = [fileio.load(f) for f in args.files]
    regions = []
    if args.point is not None:
        regions.append(separate(docs[0].polygon, _point(*args.point)))
    svg = render_svg([(d.name, d.polygon) for d in docs], regions, slopes=not args.no_slopes)
    Path(args.output).write_text(svg, encoding="utf-8")
    out.kv("written", args.output)
    out.kv("polygons", len(docs))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="aconvex", description="Angular convexity, Minkowski sums and separation.")
    ap.add_argument("--degrees", action="store_true", help="print angles in degrees")
    ap.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("aco", help="angular convexity of a polygon")
    p.add_argument("file", nargs="?")
    p.add_argument("--batch", help="text file listing one polygon file per line")
    p.set_defaults(run=_cmd_aco)

    p = sub.add_parser("certify", help="check that the sum of two polygons has no holes")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=_cmd_certify)

    p = sub.add_parser("sum", help="Minkowski sum of two polygons")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.add_argument("--method", choices=("convolution", "cycle"), default="convolution")
    p.set_defaults(run=_cmd_sum)

    p = sub.add_parser("member", help="whether a point lies in A + B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(run=_cmd_member)

    p = sub.add_parser("separate", help="angular region separating a point from a polygon")
    p.add_argument("a")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(run=_cmd_separate)

    p = sub.add_parser("render", help="draw polygons to SVG")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--point", nargs=2, metavar=("X", "Y"), help="also draw a separation wedge")
    p.add_argument("--no-slopes", action="store_true", help="omit the slope diagram panel")
    p.set_defaults(run=_cmd_render)
    return ap


def run_command(argv: Optional[Sequence[str]] = None, stdout: TextIO = sys.stdout,
                stderr: TextIO = sys.stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        if args.command == "aco" and not (args.file or args.batch):
            raise ParseError("aco needs a file or --batch")
        args.run(args, _Out(stdout, args.degrees))
        return 0
    except GeometryError as exc:
        if isinstance(exc, ParseError):
            stderr.write(f"error={exc.reason} line={exc.line} column={exc.column} "
                         f"message={_one_line(exc.message)}\n")
        else:
            stderr.write(f"error={exc.reason} message={_one_line(exc)}\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(f"error=IOError message={_one_line(exc)}\n")
        return 3


def _one_line(exc) -> str:
    return " ".join(str(exc).split())


def main(argv: Optional[Iterable[str]] = None) -> None:
    sys.exit(run_command(None if argv is None else list(argv)))


if __name__ == "__main__":
    main()
