"""Command line entry point: ``simulate``, ``fit``, ``lune-check`` and ``replay``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import lune
from .antenna import RadiusKind
from .geom import Point2D
from .harness import (
    ConfigError,
    Scenario,
    export_csv,
    export_summary_json,
    replay_crossings,
    run_scenario,
)
from .localize import GEOMETRIES, RadiusMode
from .mission import CrossingEvent, TripleConstraints
from .stats import Histogram, InsufficientData, ZeroExpected, chi2_test, fit_moments

EXIT_OK, EXIT_IO, EXIT_CONFIG = 0, 1, 2


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _write(data: bytes, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def cmd_simulate(args: argparse.Namespace) -> int:
    s = Scenario.from_json(Path(args.scenario).read_text())
    if args.seed is not None:
        s = s.replace(seed=args.seed)
    report, records = run_scenario(s, workers=args.workers)
    if args.out_csv:
        _write(export_csv(records), args.out_csv)
    summary = export_summary_json(report)
    if args.out_json:
        _write(summary, args.out_json)
    if not args.out_csv and not args.out_json:
        _write(summary, None)
    return EXIT_OK


def _parse_bins(spec: str, data: np.ndarray) -> list[float]:
    if spec == "auto":
        return [float(e) for e in np.histogram_bin_edges(data, bins="auto")]
    try:
        edges = [float(x) for x in spec.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bins must be 'auto' or comma-separated edges: {exc}") from exc
    if len(edges) < 2:
        raise ConfigError("need at least two bin edges")
    return edges


def cmd_fit(args: argparse.Namespace) -> int:
    text = Path(args.input).read_text()
    try:
        data = np.array([float(line) for line in text.split()], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"radii file must hold one number per line: {exc}") from exc
    try:
        model = fit_moments(data, RadiusKind(args.dist))
        hist = Histogram.from_data(data, _parse_bins(args.bins, data))
        report = chi2_test(hist, model, args.dof)
    except (InsufficientData, ZeroExpected, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    _write((json.dumps(report.to_dict(), indent=2) + "\n").encode(), None)
    return EXIT_OK


def cmd_lune_check(args: argparse.Namespace) -> int:
    try:
        c = lune.CanonicalCrossing(r1=args.r1, r2=args.r2, k=args.k, iw=args.iw)
        v = lune.intersection_points(c)
    except lune.NoVertices as exc:
        out = {"r1": args.r1, "r2": args.r2, "k": args.k, "iw": args.iw, "vertices": None, "error": str(exc)}
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    else:
        out = {"r1": args.r1, "r2": args.r2, "k": args.k, "iw": args.iw, "vertices": v.as_dict()}
    _write((json.dumps(out, indent=2) + "\n").encode(), None)
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    raw = json.loads(Path(args.crossings).read_text())
    try:
        events = [CrossingEvent.from_dict(d) for d in raw]
        if args.mode == "measured":
            if not all(e.has_ranges for e in events):
                raise ConfigError("measured mode needs r1_meas and r2_meas on every crossing")
            mode = RadiusMode.measured()
        elif args.radius is None:
            raise ConfigError(f"{args.mode} mode needs --radius")
        else:
            mode = RadiusMode(args.mode, args.radius)
        constraints = TripleConstraints(args.r_min, args.alpha_min)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    gd = Point2D(*args.gd)
    report, records = replay_crossings(events, gd, mode, constraints, args.geometry)
    if args.out_csv:
        _write(export_csv(records), args.out_csv)
    _write(export_summary_json(report), args.out_json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anchorloc", description="Mobile-anchor localization simulator")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo scenario")
    sim.add_argument("--scenario", required=True, help="scenario JSON file")
    sim.add_argument("--out-csv")
    sim.add_argument("--out-json")
    sim.add_argument("--seed", type=_u64)
    sim.add_argument("--workers", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit a radius distribution and run a chi-squared test")
    fit.add_argument("--input", required=True, help="newline-separated radii")
    fit.add_argument("--dist", required=True, choices=("uniform", "normal"))
    fit.add_argument("--bins", default="auto", help="'auto' or comma-separated edges")
    fit.add_argument("--dof", type=int)
    fit.set_defaults(func=cmd_fit)

    lc = sub.add_parser("lune-check", help="closed-form vertices of the four-circle region")
    lc.add_argument("--r1", type=float, required=True)
    lc.add_argument("--r2", type=float, required=True)
    lc.add_argument("--k", type=int, required=True)
    lc.add_argument("--iw", type=float, default=0.40)
    lc.set_defaults(func=cmd_lune_check)

    rp = sub.add_parser("replay", help="localize from recorded crossings")
    rp.add_argument("--crossings", required=True, help="JSON list of crossings")
    rp.add_argument("--mode", choices=("observed", "manufacturer", "measured"), default="observed")
    rp.add_argument("--radius", type=float)
    rp.add_argument("--gd", type=float, nargs=2, default=(0.0, 0.0), metavar=("X", "Y"))
    rp.add_argument("--r-min", type=float, default=60.0)
    rp.add_argument("--alpha-min", type=float, default=20.0)
    rp.add_argument("--geometry", choices=GEOMETRIES, default="endpoints")
    rp.add_argument("--out-csv")
    rp.add_argument("--out-json")
    rp.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
