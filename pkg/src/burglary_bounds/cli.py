"""Command-line entry point: compute, compare, chart, simulate, validate."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bounds import METRICS, BoundsConfig, DatasetError, InvariantViolation, compute_all
from .comparison import PCT_CONVENTIONS, ComparisonVerdict, compare_cities, compare_years
from .domain import Dataset, HierarchyAssumption, has_errors, validate
from .ingestion import LoadError, SourceManifest, embedded_reference, load
from .interval import ConfidenceSpec, Interval, IntervalError
from .report import (CHART_METRICS, build_bundle, bundle_json, bundle_text, verdict_row,
                     write_bundle, write_chart)
from .simulator import ScenarioError, SimScenario, run_coverage

log = logging.getLogger("burglary_bounds")

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--embedded", action="store_true",
                     help="use the bundled NC 2009-2011 dataset (default)")
    src.add_argument("--manifest", type=Path, help="JSON manifest naming the four input CSVs")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--theta-lb", type=float, default=0.005)
    p.add_argument("--theta-ub", type=float, default=0.01)
    p.add_argument("--z", type=float, default=ConfidenceSpec().z)
    p.add_argument("--pop-basis", choices=("state", "federal", "mid"), default="state",
                   help="population used for conventional point rates")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="burglary-bounds",
        description="Partial-identification bounds on residential burglary counts and rates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("compute", parents=[common], help="compute all bounds and write a report bundle")

    cmp_ = sub.add_parser("compare", parents=[common], help="classify one comparison")
    cmp_.add_argument("--cities", nargs=2, metavar=("CITY_A", "CITY_B"))
    cmp_.add_argument("--year", type=int)
    cmp_.add_argument("--city")
    cmp_.add_argument("--years", nargs=2, type=int, metavar=("YEAR_A", "YEAR_B"))
    cmp_.add_argument("--metric", required=True, choices=METRICS)
    cmp_.add_argument("--pct-convention", choices=PCT_CONVENTIONS, default="base",
                      help="percent change relative to A (base) or to the larger point")

    ch = sub.add_parser("chart", parents=[common], help="render a dot-and-interval SVG")
    ch.add_argument("--metric", required=True, choices=sorted(CHART_METRICS))
    ch.add_argument("--output", type=Path, help="SVG path (default: <out>/chart_<metric>.svg)")

    sim = sub.add_parser("simulate", parents=[common], help="Monte Carlo coverage run")
    sim.add_argument("scenario", type=Path, help="scenario JSON file")
    sim.add_argument("--output", type=Path, help="report path (default: stdout)")

    sub.add_parser("validate", parents=[common], help="report dataset findings")
    return parser


def _dataset(args) -> Dataset:
    try:
        hierarchy = HierarchyAssumption(Interval(args.theta_lb, args.theta_ub))
        confidence = ConfidenceSpec(z=args.z)
    except (IntervalError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.manifest:
        return load(SourceManifest.from_json(args.manifest), hierarchy=hierarchy,
                    confidence=confidence)
    return embedded_reference(hierarchy=hierarchy, confidence=confidence)


def _config(args) -> BoundsConfig:
    return BoundsConfig(pop_basis=args.pop_basis)


def _emit(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def cmd_compute(args) -> int:
    ds = _dataset(args)
    config = _config(args)
    bundle = build_bundle(ds, compute_all(ds, config), config)
    if args.out is None:
        if args.format == "csv":
            raise UsageError("--format csv writes one file per table; give --out")
        _emit(bundle_text(bundle) if args.format == "text" else bundle_json(bundle), None)
        return EXIT_OK
    try:
        for p in write_bundle(bundle, args.out, args.format):
            log.info("wrote %s", p)
    except OSError as exc:
        raise UsageError(f"cannot write to {args.out}: {exc.strerror}") from None
    return EXIT_OK


def _verdict_text(v: ComparisonVerdict) -> str:
    row = verdict_row(v)
    lines = [
        f"A: {row['a_city']} {row['a_year']}  {row['metric']}  [{row['a_lb']}, {row['a_ub']}]"
        f"  point {row['a_point']}",
        f"B: {row['b_city']} {row['b_year']}  {row['metric']}  [{row['b_lb']}, {row['b_ub']}]"
        f"  point {row['b_point']}",
        f"point change: {row['pct_change']}% ({row['pct_convention']})",
        f"verdict: {row['verdict']}",
    ]
    if v.incomplete:
        lines.append("caveat: at least one side uses a single population estimate (incomplete)")
    return "\n".join(lines) + "\n"


def cmd_compare(args) -> int:
    by_cities = args.cities is not None or args.year is not None
    by_years = args.city is not None or args.years is not None
    if by_cities == by_years:
        raise UsageError("give either --cities A B --year Y or --city C --years Y1 Y2")
    if by_cities and (args.cities is None or args.year is None):
        raise UsageError("--cities needs --year")
    if by_years and (args.city is None or args.years is None):
        raise UsageError("--city needs --years")
    ds = _dataset(args)
    results = compute_all(ds, _config(args))
    try:
        if by_cities:
            v = compare_cities(results, args.cities[0], args.cities[1], args.year, args.metric,
                               pct_convention=args.pct_convention)
        else:
            v = compare_years(results, args.city, args.years[0], args.years[1], args.metric,
                              pct_convention=args.pct_convention)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]}; cities: {', '.join(ds.cities)}; "
                         f"years: {', '.join(map(str, ds.years))}") from None
    if args.format == "json":
        text = json.dumps(verdict_row(v), indent=2) + "\n"
    else:
        text = _verdict_text(v)
    _emit(text, args.out / "comparison.json" if args.out and args.format == "json" else
          args.out / "comparison.txt" if args.out else None)
    return EXIT_OK


def cmd_chart(args) -> int:
    ds = _dataset(args)
    config = _config(args)
    bundle = build_bundle(ds, compute_all(ds, config), config, comparisons=())
    path = args.output or (args.out or Path(".")) / f"chart_{args.metric}.svg"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        write_chart(bundle, args.metric, path)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    log.info("wrote %s", path)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        sc = SimScenario.from_json(args.scenario)
    except FileNotFoundError:
        raise UsageError(f"scenario file not found: {args.scenario}") from None
    except (ScenarioError, IntervalError) as exc:
        raise UsageError(str(exc)) from None
    out = args.output or (args.out / "coverage.json" if args.out else None)
    _emit(run_coverage(sc).to_json(), out)
    return EXIT_OK


def cmd_validate(args) -> int:
    ds = _dataset(args)
    findings = validate(ds)
    for f in findings:
        print(f)
    return EXIT_USAGE if has_errors(findings) else EXIT_OK


COMMANDS = {"compute": cmd_compute, "compare": cmd_compare, "chart": cmd_chart,
            "simulate": cmd_simulate, "validate": cmd_validate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s",
                        stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (LoadError, DatasetError) as exc:
        findings = getattr(exc, "findings", [])
        if findings:
            for f in findings:
                print(f, file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"usage hint: {parser.prog} {args.command} --help", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
