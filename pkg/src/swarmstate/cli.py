"""Command-line interface: nei, cube, hierarchy and sim subcommands.

Reports go to stdout as JSON (pretty by default). Exit codes: 0 on
success, 2 for usage errors, 3 for unparseable input, 4 for domain or
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import __version__
from .cube import (
    Axis,
    AxisSample,
    CubeState,
    adaptation_paths,
    adjacent_states,
    axis_h,
    classify_cube,
)
from .entropy import (
    H_HIGH,
    H_LOW,
    NominalDistribution,
    WeightedEvents,
    classify_zone,
    entropy,
    normalized_entropy,
    reduce,
    surplus_information,
)
from .errors import ConfigError, DomainError, ParseError
from .hierarchy import RankTable, cohesion, from_edge_list, level_distribution
from .sim import load_scenario, run, with_seed, write_h_series_csv, write_metrics_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4

BASES = {"2": 2.0, "e": math.e, "10": 10.0}


# ---------------------------------------------------------------------------
# Event table ingestion
# ---------------------------------------------------------------------------


def _parse_number(text: str, what: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"line {lineno}: {what} {text!r} is not a number") from None


def _events_from_rows(rows) -> WeightedEvents:
    events = []
    for lineno, label, intensity, probability in rows:
        if intensity <= 0:
            raise DomainError(
                f"line {lineno}: intensity must be positive, got {intensity} "
                f"(event {label!r})"
            )
        if probability is not None and not 0 < probability <= 1:
            raise DomainError(
                f"line {lineno}: probability must be in (0, 1], got {probability} "
                f"(event {label!r})"
            )
        events.append((lineno, label, intensity, probability))
    with_p = [e for e in events if e[3] is not None]
    if with_p and len(with_p) != len(events):
        missing = next(e for e in events if e[3] is None)
        raise ParseError(f"line {missing[0]}: probability missing while other rows have one")
    if not events:
        raise ParseError("event table holds no events")
    if with_p:
        return WeightedEvents((label, x, p) for _, label, x, p in events)
    return WeightedEvents.uniform(
        [x for _, _, x, _ in events], [label for _, label, _, _ in events]
    )


def read_event_table(path: Path) -> WeightedEvents:
    """Load a weighted event table from a CSV or JSON file.

    CSV needs a ``label,intensity[,probability]`` header; JSON holds a
    list of records with the same keys. A missing probability column
    means equal probabilities.
    """
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if path.suffix.lower() == ".json":
        return _event_table_json(text, path)
    return _event_table_csv(text)


def _event_table_csv(text: str) -> WeightedEvents:
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("event table holds no events") from None
    header = [column.strip().lower() for column in header]
    if header[:2] != ["label", "intensity"] or header not in (
        ["label", "intensity"],
        ["label", "intensity", "probability"],
    ):
        raise ParseError(
            "line 1: header must be 'label,intensity' or 'label,intensity,probability', "
            f"got {','.join(header)!r}"
        )
    has_p = len(header) == 3
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} columns, got {len(row)}")
        label = row[0].strip()
        intensity = _parse_number(row[1].strip(), "intensity", lineno)
        probability = _parse_number(row[2].strip(), "probability", lineno) if has_p else None
        rows.append((lineno, label, intensity, probability))
    return _events_from_rows(rows)


def _event_table_json(text: str, path: Path) -> WeightedEvents:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, list):
        raise ParseError(f"{path}: expected a JSON list of records")
    rows = []
    for i, record in enumerate(data, start=1):
        if not isinstance(record, dict) or "label" not in record or "intensity" not in record:
            raise ParseError(f"record {i}: needs 'label' and 'intensity' fields")
        for key in ("intensity", "probability"):
            if key in record and not isinstance(record[key], (int, float)):
                raise ParseError(f"record {i}: {key} must be a number")
        rows.append(
            (i, record["label"], float(record["intensity"]),
             float(record["probability"]) if "probability" in record else None)
        )
    return _events_from_rows(rows)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _round_significant(value: float, digits: int = 2) -> float:
    if value == 0:
        return 0.0
    return round(value, digits - 1 - math.floor(math.log10(abs(value))))


def printed_precision(dist: NominalDistribution) -> NominalDistribution:
    """Shares as a two-significant-figure table would print them.

    Values below the 0.01 print resolution are raised to 0.01 (a
    positive share cannot print as zero), then the vector is
    renormalized. This is the 'paper-2dp' reproduction mode.
    """
    rounded = [max(_round_significant(float(v)), 0.01) for v in dist.q]
    total = sum(rounded)
    return NominalDistribution(
        labels=dist.labels,
        q=tuple(v / total for v in rounded),
        n=dist.n,
        expectation=dist.expectation,
    )


def _ratio(value: float):
    return "Infinity" if math.isinf(value) else value


def _zone_block(h: float) -> dict:
    report = classify_zone(h)
    return {
        "zone": report.zone.value,
        "disorder": report.disorder,
        "order": report.order,
        "disorder_per_order": _ratio(report.disorder_per_order),
        "order_per_disorder": _ratio(report.order_per_disorder),
        "surplus_information": report.surplus_information,
    }


def _tool_block() -> dict:
    return {"name": "swarmstate", "version": __version__}


def nei_report(events: WeightedEvents, rounding: str = "exact", base_name: str = "e") -> dict:
    dist = reduce(events)
    if rounding == "paper-2dp":
        dist = printed_precision(dist)
    base = BASES[base_name]
    surplus = surplus_information(dist, base)
    h = normalized_entropy(dist)
    return {
        "tool": _tool_block(),
        "command": "nei",
        "rounding": rounding,
        "input": {
            "events": [
                {"label": ev.label, "intensity": float(ev.intensity),
                 "probability": float(ev.probability)}
                for ev in events.events
            ]
        },
        "expectation": float(dist.expectation),
        "q": [float(v) for v in dist.q],
        "entropy": {"base": base_name, "value": entropy(dist, base)},
        "surplus_information": {"absolute": surplus.absolute, "relative": surplus.relative},
        "h": h,
        **_zone_block(h),
        "thresholds": {"h_low": H_LOW, "h_high": H_HIGH},
    }


def hierarchy_report(tree, ranks: RankTable, base_name: str = "e") -> dict:
    events = level_distribution(tree, ranks)
    dist = reduce(events)
    result = cohesion(tree, ranks)
    base = BASES[base_name]
    return {
        "tool": _tool_block(),
        "command": "hierarchy",
        "agents": len(tree),
        "levels": tree.depth,
        "level_distribution": [
            {"level": ev.label, "rank": float(ev.intensity), "probability": float(ev.probability)}
            for ev in events.events
        ],
        "expectation": float(dist.expectation),
        "q": [float(v) for v in dist.q],
        "entropy": {"base": base_name, "value": entropy(dist, base)},
        "h": result.h,
        "cohesion": result.label.value,
        **_zone_block(result.h),
        "thresholds": {"h_low": H_LOW, "h_high": H_HIGH},
    }


def _emit(report: dict, compact: bool) -> None:
    if compact:
        print(json.dumps(report, sort_keys=False))
    else:
        print(json.dumps(report, indent=2, sort_keys=False))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_nei(args) -> int:
    events = read_event_table(Path(args.input))
    _emit(nei_report(events, rounding=args.rounding, base_name=args.base), args.compact)
    return EXIT_OK


def _cmd_cube(args, parser) -> int:
    axis_files = (args.control, args.resource, args.function)
    if args.h is not None and any(axis_files):
        parser.error("give either --h or the three axis files, not both")
    if args.h is not None:
        control_h, resource_h, function_h = args.h
        axes = {
            name: {"h": value, **_zone_block(value)}
            for name, value in zip(
                ("control", "resource", "function"), (control_h, resource_h, function_h)
            )
        }
    elif all(axis_files):
        axes = {}
        values = []
        for axis, file in zip(Axis, axis_files):
            events = read_event_table(Path(file))
            sample = AxisSample(axis=axis, events=events, coefficient=args.coefficient)
            dist = reduce(events)
            value = axis_h(sample)
            axes[axis.value] = {
                "h": value,
                "expectation": float(dist.expectation),
                "q": [float(v) for v in dist.q],
                **_zone_block(value),
            }
            values.append(value)
        control_h, resource_h, function_h = values
    else:
        parser.error("cube needs --h CONTROL RESOURCE FUNCTION or all of --control/--resource/--function")

    state = classify_cube(control_h, resource_h, function_h)
    report = {
        "tool": _tool_block(),
        "command": "cube",
        "axes": axes,
        "cube": state.as_record(),
        "thresholds": {"h_low": H_LOW, "h_high": H_HIGH},
    }
    if args.adjacent:
        report["adjacent"] = [
            s.as_record() for s in sorted(adjacent_states(state), key=lambda s: s.index)
        ]
    if args.paths_to is not None:
        target = CubeState.from_index(args.paths_to)
        paths = adaptation_paths(state, target, args.max_len)
        report["paths"] = {
            "target": target.as_record(),
            "max_length": args.max_len,
            "count": len(paths),
            "paths": [[s.as_record() for s in path] for path in paths],
        }
    _emit(report, args.compact)
    return EXIT_OK


def _cmd_hierarchy(args) -> int:
    try:
        text = Path(args.edges).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {args.edges}: {exc}") from None
    tree = from_edge_list(text)
    ranks = RankTable()
    if args.ranks:
        ranks = _read_rank_table(Path(args.ranks))
    _emit(hierarchy_report(tree, ranks, base_name=args.base), args.compact)
    return EXIT_OK


def _read_rank_table(path: Path) -> RankTable:
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected an object mapping level to rank")
    table = {}
    for key, value in data.items():
        try:
            level = int(key)
        except ValueError:
            raise ParseError(f"{path}: level {key!r} is not an integer") from None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{path}: rank for level {key} must be a number")
        table[level] = float(value)
    return RankTable(table)


def _cmd_sim(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = with_seed(scenario, args.seed)
    result = run(scenario.config, scenario.environment)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(result.metrics, out / "metrics.csv")
    write_h_series_csv(result.metrics, out / "h_series.csv")
    summary = {
        "tool": _tool_block(),
        "command": "sim",
        "scenario": scenario.name,
        "seed": scenario.environment.seed,
        **result.summary.as_record(),
        "artifacts": {
            "metrics": str(out / "metrics.csv"),
            "h_series": str(out / "h_series.csv"),
            "summary": str(out / "summary.json"),
        },
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    _emit(summary, args.compact)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmstate",
        description="Normalized-entropy state detection for multi-agent groups.",
    )
    parser.add_argument("--version", action="version", version=f"swarmstate {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    nei = sub.add_parser("nei", help="normalized entropy of a weighted event table")
    nei.add_argument("input", help="event table (CSV or JSON)")
    nei.add_argument(
        "--rounding",
        choices=["exact", "paper-2dp"],
        default="exact",
        help="exact shares, or printed-table precision reproduction",
    )
    nei.add_argument("--base", choices=list(BASES), default="e", help="base for raw entropy display")
    nei.add_argument("--compact", action="store_true", help="single-line JSON output")

    cube = sub.add_parser("cube", help="classify three axes into a cube cell")
    cube.add_argument("--h", nargs=3, type=float, metavar=("CONTROL", "RESOURCE", "FUNCTION"))
    cube.add_argument("--control", help="control-axis event table")
    cube.add_argument("--resource", help="resource-axis event table")
    cube.add_argument("--function", help="function-axis event table")
    cube.add_argument("--coefficient", type=float, default=1.0, help="axis intensity coefficient")
    cube.add_argument("--adjacent", action="store_true", help="list one-step neighbour cells")
    cube.add_argument("--paths-to", type=int, metavar="INDEX", help="enumerate paths to a cell (1..27)")
    cube.add_argument("--max-len", type=int, default=6, help="path length bound for --paths-to")
    cube.add_argument("--compact", action="store_true")

    hierarchy = sub.add_parser("hierarchy", help="cohesion of a command tree")
    hierarchy.add_argument("edges", help="edge-list file: 'child parent' per line, lone root")
    hierarchy.add_argument("--ranks", help="JSON file mapping level to rank")
    hierarchy.add_argument("--base", choices=list(BASES), default="e")
    hierarchy.add_argument("--compact", action="store_true")

    sim = sub.add_parser("sim", help="run a swarm scenario")
    sim.add_argument("scenario", help="scenario JSON path or bundled name (stable, moderate, volatile)")
    sim.add_argument("--out", required=True, help="directory for CSV/JSON artifacts")
    sim.add_argument("--seed", type=int, help="override the environment seed")
    sim.add_argument("--compact", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "nei":
            return _cmd_nei(args)
        if args.command == "cube":
            try:
                return _cmd_cube(args, parser)
            except SystemExit as exc:  # parser.error inside the command
                return exc.code if isinstance(exc.code, int) else EXIT_USAGE
        if args.command == "hierarchy":
            return _cmd_hierarchy(args)
        if args.command == "sim":
            return _cmd_sim(args)
        parser.error(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"swarmstate: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, DomainError) as exc:
        print(f"swarmstate: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
