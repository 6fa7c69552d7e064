"""Command-line driver.

Subcommands: ``simulate``, ``analyze``, ``scan-delay``, ``sweep-power``,
``sweep-oam``.  Exit codes: 0 success, 2 configuration error, 3 data-format
error, 4 insufficient-data estimate.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import pipeline, report
from .config import ExperimentConfig, load_config
from .errors import (
    CapacityError,
    ConfigError,
    FormatError,
    InsufficientDataError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FORMAT = 3
EXIT_INSUFFICIENT = 4

DEFAULT_POWERS = (7.0, 14.0, 28.0, 56.0)
DEFAULT_OAM = (0, 1, 2, 3)


def _add_common(p, needs_out=True):
    p.add_argument("--config", help="TOML config file (defaults apply if omitted)")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--window-ps", type=int, help="coincidence window, full width (default 410)")
    if needs_out:
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--plot", metavar="PNG", help="also render a figure to this path")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="twistg2",
        description="Simulate and analyze a heralded twisted-photon source "
        "in a three-detector HBT experiment.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the simulation and write a TTAG/CSV stream")
    _add_common(p, needs_out=False)
    p.add_argument("--out", required=True, help="time-tag output (.ttag binary or .csv)")

    p = sub.add_parser("analyze", help="counts and both g2 estimates for a tag file")
    _add_common(p)
    p.add_argument("--input", required=True, help="TTAG or CSV time-tag file")

    p = sub.add_parser("scan-delay", help="g2 versus electronic delay on signal arm 2")
    _add_common(p)
    p.add_argument("--input", help="scan a recorded tag file instead of simulating")
    p.add_argument("--step-ps", type=int, help="delay step (default 500)")
    p.add_argument("--n-steps", type=int, help="steps on each side of zero (default 10)")

    p = sub.add_parser("sweep-power", help="one simulated run per pump power")
    _add_common(p)
    p.add_argument("--values", help="comma-separated powers in mW")

    p = sub.add_parser("sweep-oam", help="one simulated run per pump OAM order")
    _add_common(p)
    p.add_argument("--values", help="comma-separated OAM orders")

    return ap


def _load(args) -> ExperimentConfig:
    if args.config:
        config = load_config(args.config, seed_override=args.seed)
    else:
        config = ExperimentConfig()
        if args.seed is not None:
            config = replace(
                config,
                seed=args.seed,
                source=replace(config.source, seed=args.seed),
            )
    if args.window_ps is not None:
        config = replace(config, spec=replace(config.spec, window_ps=args.window_ps))
    for key, attr in (("step_ps", "step_ps"), ("n_steps", "n_steps_each_side")):
        value = getattr(args, key, None)
        if value is not None:
            config = replace(config, sweep=replace(config.sweep, **{attr: value}))
    return config


def _sweep_values(args, config, kind, fallback):
    if getattr(args, "values", None):
        raw = [v for v in args.values.split(",") if v.strip()]
        cast = float if kind == "power" else int
        try:
            return tuple(cast(v) for v in raw)
        except ValueError as exc:
            raise ConfigError(f"bad --values: {exc}") from exc
    if config.sweep.kind == kind and config.sweep.values:
        return config.sweep.values
    return fallback


def _emit(args, config, kind, rows, aborted) -> int:
    rep = report.build_report(
        kind, rows, seed=config.seed, window_ps=config.spec.window_ps, aborted=aborted
    )
    report.write_report(rep, args.out, args.format)
    if args.plot:
        from .plots import plot_report

        plot_report(rep, args.plot)
    print(json.dumps({k: rep[k] for k in ("kind", "aborted")} | {"out": args.out}))
    return EXIT_INSUFFICIENT if aborted else EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load(args)
        if args.command == "simulate":
            pipeline.run_simulate(config, args.out)
            print(json.dumps({"kind": "simulate", "out": args.out}))
            return EXIT_OK
        if args.command == "analyze":
            try:
                row = pipeline.run_analyze(args.input, config.spec)
            except InsufficientDataError as exc:
                print(f"insufficient data: {exc}", file=sys.stderr)
                return EXIT_INSUFFICIENT
            rows = [{"param_name": "none", "param_value": 0, **row}]
            return _emit(args, config, "analyze", rows, aborted=False)
        if args.command == "scan-delay":
            stream = None
            if args.input:
                from .timetags import read_tags

                stream = read_tags(args.input)
            rows, aborted = pipeline.run_delay_scan(config, stream)
            return _emit(args, config, "scan-delay", rows, aborted)
        if args.command == "sweep-power":
            values = _sweep_values(args, config, "power", DEFAULT_POWERS)
            rows, aborted = pipeline.run_sweep(config, "power", values)
            return _emit(args, config, "sweep-power", rows, aborted)
        if args.command == "sweep-oam":
            values = _sweep_values(args, config, "oam", DEFAULT_OAM)
            rows, aborted = pipeline.run_sweep(config, "oam", values)
            return _emit(args, config, "sweep-oam", rows, aborted)
        raise AssertionError(args.command)
    except (ConfigError, CapacityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FormatError as exc:
        print(f"data format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    raise SystemExit(main())
