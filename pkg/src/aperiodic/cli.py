"""Command-line entry point: ``aperiodic {generate,stats,group,hyperbolic,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
Relative output paths resolve against ``$APERIODIC_OUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import formats
from .analysis import GROUP_ORDERS, group_ball, growth_report, orientation_spectrum
from .catalog import SYSTEMS, get_system
from .hyperbolic import (
    RegionError,
    build_region,
    count_centers_per_tile,
    disk_centers,
    parse_choices,
)
from .shapes import Box
from .substitution import SubstitutionSystem, expand, verify_partition

OUT_DIR_ENV = "APERIODIC_OUT_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

log = logging.getLogger("aperiodic")


class UsageError(Exception):
    pass


def out_path(given: Optional[str], default_name: str) -> Path:
    base = Path(os.environ.get(OUT_DIR_ENV, "."))
    p = Path(given) if given else Path(default_name)
    if not p.is_absolute():
        p = base / p
    return p


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror or e}") from None
    log.info("wrote %s", path)


def _system(name: str) -> SubstitutionSystem:
    try:
        return get_system(name)
    except KeyError as e:
        raise UsageError(e.args[0]) from None


def cmd_generate(args) -> int:
    system = _system(args.system)
    fmt = args.format
    if fmt == "svg" and system.dimension != 2:
        raise UsageError(f"svg needs a 2D system; {system.name} is 3D (use obj or json)")
    if fmt == "obj" and system.dimension != 3:
        raise UsageError(f"obj needs a 3D system; {system.name} is 2D (use svg or json)")
    window = None
    if args.window:
        try:
            window = Box.parse(args.window)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if window.dimension != system.dimension:
            raise UsageError(f"window has {window.dimension} axes, {system.name} has {system.dimension}")
    tiles = list(expand(system, args.level, window=window, workers=args.workers))
    if fmt == "svg":
        text = formats.tiles_svg(system, args.level, tiles)
    elif fmt == "obj":
        text = formats.tiles_obj(system, args.level, tiles)
    else:
        text = formats.tiles_json(system, args.level, tiles)
    path = out_path(args.out, f"{system.name}-level{args.level}.{fmt}")
    _write(path, text)
    print(f"{system.name} level {args.level}: {len(tiles)} tiles -> {path}")
    return EXIT_OK


def cmd_stats(args) -> int:
    system = _system(args.system)
    rows = orientation_spectrum(system, args.max_level, workers=args.workers)
    path = out_path(args.out, f"{system.name}-stats.csv")
    _write(path, formats.spectrum_csv(rows))
    if len(rows) > 3:
        rep = growth_report(rows[1:])
        print(f"growth fit: {rep.fit_kind} (log residual {rep.log_residual:.4g}, power residual {rep.power_residual:.4g})")
    else:
        rep = None
    if args.figure:
        from .plotting import spectrum_figure

        fig = path.with_suffix(".svg")
        spectrum_figure(rows, fig, title=f"{system.name} orientations", report=rep)
        log.info("wrote %s", fig)
    print(f"{len(rows)} rows -> {path}")
    return EXIT_OK


def cmd_group(args) -> int:
    if args.p not in GROUP_ORDERS or args.q not in GROUP_ORDERS:
        raise UsageError(f"p and q must be one of {GROUP_ORDERS}")
    if args.max_length < 1:
        raise UsageError("max word length must be at least 1")
    rows = group_ball(args.p, args.q, args.max_length)
    path = out_path(args.out, f"group-{args.p}-{args.q}.csv")
    _write(path, formats.group_csv(rows))
    if args.figure:
        from .plotting import group_figure

        fig = path.with_suffix(".svg")
        group_figure(rows, fig, title=f"G({args.p},{args.q}) word balls")
        log.info("wrote %s", fig)
    last = rows[-1]
    state = "closed" if last.closed else "not closed"
    print(f"G({args.p},{args.q}): {last.distinct_elements} elements by word length {last.word_length}, {state}")
    return EXIT_OK


def cmd_hyperbolic(args) -> int:
    try:
        window = [float(v) for v in args.window.split(",")]
        if len(window) != 4:
            raise ValueError("window needs x0,y0,x1,y1")
        choices = parse_choices(args.choices)
        tiles = build_region(choices, window)
    except (ValueError, RegionError) as e:
        raise UsageError(str(e)) from None
    centers = [] if args.packing == "none" else disk_centers(tiles, args.packing)
    if args.format == "svg":
        text = formats.hyperbolic_svg(tiles, centers, bumps=args.bumps, radius=args.radius)
    else:
        counts = None
        outside = 0
        if centers:
            tc = count_centers_per_tile(tiles, centers)
            counts, outside = tc.counts, tc.outside
        text = formats.hyperbolic_json(tiles, centers, counts, outside, args.packing)
    path = out_path(args.out, f"binary-{args.packing}.{args.format}")
    _write(path, text)
    print(f"{len(tiles)} tiles, {len(centers)} disk centers -> {path}")
    return EXIT_OK


def run_verify(system: SubstitutionSystem, samples: int, tolerance: float, seed: int = 0, workers: int = 1) -> int:
    """Check every rule of ``system``, print a report, and return the exit code."""
    ok = True
    for proto in system.prototiles:
        rep = verify_partition(system, proto.id, samples, tolerance, seed=seed, workers=workers)
        passed = rep.passed(tolerance)
        ok &= passed
        status = "PASS" if passed else "FAIL"
        line = (
            f"{status} {system.name} rule {proto.label}: residual {rep.area_residual:.3e}, "
            f"violations {rep.multiplicity_violations}, samples {rep.samples} (rejected {rep.rejected})"
        )
        if rep.degenerate:
            line += ", degenerate geometry"
        print(line)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("samples must be at least 1")
    return run_verify(_system(args.system), args.samples, args.tolerance, args.seed, args.workers)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser("aperiodic", description="Substitution tilings, orientation statistics and the binary tiling.")
    p.add_argument("-v", "--verbose", action="store_true", help="log written files")
    sub = p.add_subparsers(dest="command", required=True)
    names = sorted(SYSTEMS)

    g = sub.add_parser("generate", help="expand a supertile and write SVG/OBJ/JSON")
    g.add_argument("system", choices=names)
    g.add_argument("--level", type=int, default=3)
    g.add_argument("--window", help="x0,y0,x1,y1 (or 6 numbers in 3D), in unit-tile coordinates")
    g.add_argument("--format", choices=("svg", "obj", "json"), default="svg")
    g.add_argument("--out", help="output file (default: <system>-level<N>.<format>)")
    g.add_argument("--workers", type=int, default=1)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("stats", help="orientation spectrum as CSV")
    s.add_argument("system", choices=names)
    s.add_argument("--max-level", type=int, default=5)
    s.add_argument("--out")
    s.add_argument("--figure", action="store_true", help="also write an SVG plot next to the CSV")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_stats)

    b = sub.add_parser("group", help="word-ball sizes of G(p,q) as CSV")
    b.add_argument("p", type=int)
    b.add_argument("q", type=int)
    b.add_argument("--max-length", type=int, default=10)
    b.add_argument("--out")
    b.add_argument("--figure", action="store_true")
    b.set_defaults(func=cmd_group)

    h = sub.add_parser("hyperbolic", help="binary tiling region and disk packing")
    h.add_argument("--window", default="0,1,2,2", help="x0,y0,x1,y1 with y0 > 0")
    h.add_argument("--choices", default="", help="parent choices as a string over L/R")
    h.add_argument("--packing", choices=("none", "original", "shifted"), default="none")
    h.add_argument("--format", choices=("svg", "json"), default="svg")
    h.add_argument("--bumps", action="store_true", help="draw decorative bumps")
    h.add_argument("--radius", type=float, default=0.2, help="hyperbolic disk radius for drawing")
    h.add_argument("--out")
    h.set_defaults(func=cmd_hyperbolic)

    v = sub.add_parser("verify", help="check every substitution rule is a partition")
    v.add_argument("system", choices=names)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--tolerance", type=float, default=1e-9)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "level", 0) < 0 or getattr(args, "max_level", 0) < 0:
        print("aperiodic: error: levels must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "workers", 1) < 1:
        print("aperiodic: error: workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"aperiodic: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
