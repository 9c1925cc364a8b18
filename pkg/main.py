#!/usr/bin/env python3
"""
Unrest Risk - command-line entry point

Usage:
    python main.py simulate --seed 7 --out synthetic/
    python main.py ingest --config synthetic/run.ini --workspace ws/
    python main.py features --config synthetic/run.ini --workspace ws/
    python main.py eventstudy --config synthetic/run.ini --workspace ws/
    python main.py garch --config synthetic/run.ini --workspace ws/ --seed 7
    python main.py select --config synthetic/run.ini --workspace ws/
    python main.py report --workspace ws/
"""

import argparse
import sys
import warnings
from pathlib import Path

from models import DataError, NumericalError
from pipeline import (
    Config,
    Workspace,
    cmd_eventstudy,
    cmd_features,
    cmd_garch,
    cmd_ingest,
    cmd_report,
    cmd_select,
    cmd_simulate,
    describe_defaults,
)

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_NUMERICAL_ERROR = 2

COMMANDS = {
    "ingest": "validate monthly/event/daily files and copy them into the workspace",
    "features": "derive returns, volatility, spreads, event dummies, lags and filtered columns",
    "eventstudy": "monthly multi-event study (CAAR, adjusted Patell, GRANKT) and daily study",
    "garch": "fit ACGARCH-M models, one per [garch] / [garch.<label>] section",
    "select": "Heckman selection models and IV-GMM with identification diagnostics",
    "simulate": "write a synthetic dataset with its generating parameters",
    "report": "collect every report in the workspace into one text file",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Event studies, ACGARCH-M and selection models for sovereign-bond unrest risk.",
        epilog="Config defaults:\n" + describe_defaults(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", type=Path, help="INI config file (defaults apply to missing keys)")
        if name != "simulate":
            sub.add_argument("--workspace", type=Path, default=Path("workspace"),
                             help="workspace directory (default: ./workspace)")
        if name in ("garch", "simulate"):
            sub.add_argument("--seed", type=int, help="random seed, overrides the config")
        if name in ("simulate", "report"):
            sub.add_argument("--out", type=Path, required=name == "simulate",
                             help="output directory (simulate) or file (report)")
    return parser


def _show_warning(command: str):
    def show(message, category, filename, lineno, file=None, line=None):
        print(f"[{command}] {category.__name__}: {message}", file=sys.stderr)
    return show


def run(args: argparse.Namespace) -> None:
    config = Config.load(args.config) if args.config else Config.empty()
    if args.command == "simulate":
        cmd_simulate(config, args.seed, args.out)
        return
    workspace = Workspace(args.workspace)
    if args.command == "ingest":
        cmd_ingest(config, workspace)
    elif args.command == "features":
        cmd_features(config, workspace)
    elif args.command == "eventstudy":
        cmd_eventstudy(config, workspace)
    elif args.command == "garch":
        cmd_garch(config, workspace, args.seed)
    elif args.command == "select":
        cmd_select(config, workspace)
    elif args.command == "report":
        cmd_report(workspace, args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings.showwarning = _show_warning(args.command)
    try:
        run(args)
    except NumericalError as e:
        print(f"[{args.command}] Numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    except DataError as e:
        print(f"[{args.command}] Error: {e}", file=sys.stderr)
        return EXIT_USER_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
