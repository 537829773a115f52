#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
DQKD Toolkit command line

    python main.py run [--config FILE] [--seed N] [--out DIR] [--format json|csv] [--set k=v ...]
    python main.py verify-mdi [--trials N] [--tol T] [--negative-control]
    python main.py attack-suite
    python main.py analyze TRANSCRIPT

Exit codes: 0 success, 1 usage error, 2 protocol abort, 3 verification failure.
"""

import argparse
import logging
import sys
from pathlib import Path

# Make the src package importable when run from elsewhere
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import (
    EXIT_USAGE,
    cmd_analyze,
    cmd_attack_suite,
    cmd_run,
    cmd_verify_mdi,
    load_run_config,
)
from src.errors import DqkdError
from src.utils import load_env, setup_logging

logger = logging.getLogger("dqkd")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors here exit with 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"[ERROR] {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dqkd", description="Two-way deterministic QKD simulator and security checks")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration (default: config/settings.yaml)")
    common.add_argument("--seed", type=int, help="session seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=["json", "csv"], help="report format (default: both)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override a configuration key (repeatable)")

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    sub.add_parser("run", parents=[common], help="run one session end to end")

    verify = sub.add_parser("verify-mdi", parents=[common], help="randomized basis-independence checks")
    verify.add_argument("--trials", type=int, help="random unitaries per ancilla dimension")
    verify.add_argument("--tol", type=float, help="largest accepted entrywise deviation")
    verify.add_argument("--negative-control", action="store_true",
                        help="use basis-dependent inputs; every trial is expected to fail")

    sub.add_parser("attack-suite", parents=[common], help="paired Bob/Eve measurement runs over the attack registry")

    analyze = sub.add_parser("analyze", parents=[common], help="statistics and key rate of a saved transcript")
    analyze.add_argument("transcript", help="JSON-lines transcript written by run")
    return parser


def main(argv=None) -> int:
    """Parse arguments, load the configuration and dispatch the command."""
    args = build_parser().parse_args(argv)

    try:
        load_env()
        run = load_run_config(args.config, args.overrides, args.seed, args.out, args.format)
    except (FileNotFoundError, DqkdError, ValueError) as e:
        print(f"[ERROR] Configuration failed: {e}")
        return EXIT_USAGE
    setup_logging(run.log_level)

    try:
        if args.command == "run":
            return cmd_run(run)
        if args.command == "verify-mdi":
            return cmd_verify_mdi(run, args.trials, args.tol, args.negative_control)
        if args.command == "attack-suite":
            return cmd_attack_suite(run)
        return cmd_analyze(run, Path(args.transcript))
    except FileNotFoundError as e:
        print(f"[ERROR] {e}")
        return EXIT_USAGE
    except DqkdError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"[ERROR] {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
