#!/usr/bin/env python3
"""
Command-line entry point.
Spectral asymptotics lab for weighted Hankel operators.
"""

import argparse
import asyncio
import logging
import sys
from typing import Optional, Sequence

from config import config
from handlers import SUBCOMMANDS
from handlers import runs as runs_command
from handlers.common import CommandResult
from services.exceptions import LabError
from templates.messages import Messages

logger = logging.getLogger(__name__)


def setup_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
        ],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hankel_lab", description=Messages.DESCRIPTION)
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level (default from HANKEL_LOG_LEVEL)")
    parser.add_argument(
        "--record",
        action="store_true",
        default=config.RECORD_RUNS,
        help="store this run in the run registry",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in SUBCOMMANDS:
        module.add_parser(subparsers)
    return parser


def _flag_params(args: argparse.Namespace) -> dict:
    return {key: value for key, value in vars(args).items() if key not in ("handler", "record", "log_level")}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return exc.code if isinstance(exc.code, int) else 2

    setup_logging(args.log_level)

    try:
        config.validate()
        result = args.handler(args)
    except LabError as exc:
        logger.error(Messages.ERROR_FAILED.format(kind=type(exc).__name__, error=exc))
        result = CommandResult(exc.exit_code, _flag_params(args), {"error": str(exc)})

    if args.record and args.command != "runs":
        asyncio.run(runs_command.record(args.command, result))
    return result.exit_code


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)
