"""Command-line entry point.

    cwac --data iris.csv --mode cwac --min-wsup 0.01 --min-wconf 0.5 --report text

Settings come from defaults, then an optional ``--config`` file of
``key=value`` lines, then explicit flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .errors import CWACError
from .experiment import (
    MODES,
    REPORT_FORMATS,
    ExperimentConfig,
    emit_report,
    load_config_file,
    run_comparison,
    run_experiment,
)
from .miner import GENERATION_MODES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cwac",
        description="Mine weighted class association rules and evaluate them on a holdout split.",
    )
    p.add_argument("--config", help="file of key=value settings; flags override it")
    p.add_argument("--data", dest="data_path", help="delimited text file with a header row")
    p.add_argument("--class-column", help="class column name or position (default: last)")
    p.add_argument("--bins", type=int, help="equal-frequency bins for numeric columns (default 3)")
    p.add_argument("--test-fraction", type=float, help="holdout test share (default 1/3)")
    p.add_argument("--seed", type=int, help="split seed (default 0)")
    p.add_argument("--min-wsup", type=float, help="minimum (weighted) support (default 0.01)")
    p.add_argument("--min-wconf", type=float, help="minimum (weighted) confidence (default 0.5)")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--generation", choices=GENERATION_MODES)
    hits = p.add_mutually_exclusive_group()
    hits.add_argument("--include-class-in-hits", dest="include_class_in_hits",
                      action="store_const", const=True)
    hits.add_argument("--exclude-class-from-hits", dest="include_class_in_hits",
                      action="store_const", const=False)
    p.add_argument("--report", dest="report_format", choices=REPORT_FORMATS)
    p.add_argument("--rules-out", help="write final rules here, one per line")
    p.add_argument("--delimiter")
    p.add_argument("--missing-token")
    p.add_argument("--max-candidates", type=int, help="candidate cap for the cba baseline")
    p.add_argument("--min-chi-square", type=float, help=argparse.SUPPRESS)
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--compare", action="store_true",
                   help="run cwac, garc and cba and print a one-line summary each")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock timings")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
    for f in dataclasses.fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if not cfg.data_path:
            raise CWACError("[config] --data is required")
        if args.compare:
            reports = run_comparison(cfg)
            text = "".join(
                f"{m:5s} rules={r.rule_counts['thresholded']:6d} final={r.rule_counts['pruned']:5d} "
                f"accuracy={r.accuracy:.4f}\n"
                for m, r in reports.items()
            )
        else:
            report = run_experiment(cfg)
            text = emit_report(report, cfg.report_format, include_timings=not args.no_timings)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (CWACError, OSError) as exc:
        print(f"cwac: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
