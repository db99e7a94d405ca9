"""Command-line entry point: ``python -m mlsa {run,features,stability}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .experiment import (ConfigError, dump_features, format_stability, load_config,
                         render_table, run_experiment, stability_suite, validate_config)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mlsa", description=__doc__)
    p.add_argument("--threads", type=int, default=1, help="worker processes for feature extraction")
    p.add_argument("-v", "--verbose", action="store_true", help="log per-stage timings")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a classification experiment")
    run.add_argument("config", type=Path)
    run.add_argument("--out", type=Path, help="output directory (overrides the config)")
    run.add_argument("--full", action="store_true",
                     help="full scale: 50 train / 15 test instances per class")

    feat = sub.add_parser("features", help="extract features and write CSVs only")
    feat.add_argument("config", type=Path)
    feat.add_argument("--out", type=Path, required=True)

    stab = sub.add_parser("stability", help="randomized PLH stability checks")
    stab.add_argument("--trials", type=int, default=100)
    stab.add_argument("--seed", type=int, default=0)
    stab.add_argument("--dim", type=int, choices=(2, 3), default=2)
    stab.add_argument("--resolution", type=int, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s %(message)s")
    try:
        if args.command == "stability":
            checks = stability_suite(args.seed, args.trials, args.resolution, args.dim)
            sys.stdout.write(format_stability(checks))
            return 0 if all(c.passed for c in checks.values()) else 1
        cfg = load_config(args.config)
        if args.command == "run":
            if args.full:
                cfg.update(train_instances=50, test_instances=15)
            name = validate_config(cfg)["name"]
            rows = run_experiment(cfg, args.out, args.threads)
            sys.stdout.write(render_table(name, rows))
        else:
            for path in dump_features(cfg, args.out, args.threads):
                print(path)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
