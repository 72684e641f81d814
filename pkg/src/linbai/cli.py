"""Command-line entry point: run experiments, presets, complexity reports.

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

import argparse
import logging
import sys

from .errors import ConfigError
from .harness import (ExperimentConfig, complexity_rows, preset,
                      preset_names, run_experiment, write_csv)


def _add_common(p):
    p.add_argument("--trials", type=int, default=None,
                   help="override the trial count")
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (default: from config)")
    p.add_argument("--seed", type=int, default=None,
                   help="override the master seed")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock times in the wall_ms column "
                        "(off by default so outputs are reproducible)")
    p.add_argument("--quiet", action="store_true", help="suppress progress")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bai",
        description="Fixed-budget best-arm identification experiments "
                    "for linear bandits under non-stationary rewards.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True, help="path to a JSON config")
    run.add_argument("--out", required=True, help="output CSV path")
    _add_common(run)

    pre = sub.add_parser("preset", help="run a built-in experiment preset")
    pre.add_argument("name", help="preset name (see list-presets)")
    pre.add_argument("--out", required=True, help="output CSV path")
    _add_common(pre)

    comp = sub.add_parser("complexity",
                          help="print complexity quantities per sweep point")
    comp.add_argument("--config", required=True)

    sub.add_parser("list-presets", help="list available preset names")
    return parser


def _override(config, args):
    d = config.to_dict()
    if args.trials is not None:
        d["trials"] = args.trials
    if args.threads is not None:
        d["workers"] = args.threads
    if args.seed is not None:
        d["instance"]["seed"] = args.seed
    if getattr(args, "out", None) is not None:
        d["out"] = args.out
    return ExperimentConfig.from_dict(d)


def _progress(row):
    print(f"  {row.instance} {row.sweep_param}={row.sweep_value} "
          f"{row.algorithm}: {row.errors}/{row.trials} errors "
          f"({row.error_rate:.4f})", file=sys.stderr)


def main(argv=None):
    logging.basicConfig(level=logging.WARNING)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in preset_names():
                print(name)
            return 0
        if args.command == "complexity":
            config = ExperimentConfig.from_file(args.config)
            print("instance,sweep_value,min_gap,h_gbai,rho_star,h_p1rage,"
                  "i0,h_bob")
            for label, value, rep in complexity_rows(config):
                hbob = "" if rep.h_bob is None else f"{rep.h_bob:.6g}"
                val = "" if value is None else f"{value:g}"
                print(f"{label},{val},{rep.min_gap:.6g},{rep.h_gbai:.6g},"
                      f"{rep.rho_star:.6g},{rep.h_p1rage:.6g},{rep.i0},"
                      f"{hbob}")
            return 0
        if args.command == "run":
            config = ExperimentConfig.from_file(args.config)
        else:
            config = preset(args.name)
        config = _override(config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = run_experiment(
            config, timing=args.timing,
            progress=None if args.quiet else _progress)
        write_csv(rows, config.out)
        print(f"wrote {len(rows)} rows to {config.out}", file=sys.stderr)
        failed = [r for r in rows if r.failed]
        for r in failed:
            print(f"FAILED {r.instance} {r.sweep_param}={r.sweep_value}: "
                  f"{r.failed}", file=sys.stderr)
        return 0
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
