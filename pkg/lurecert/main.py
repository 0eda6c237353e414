"""
Command-line entry point for lurecert
"""

import argparse
import sys
from typing import List, Optional

from . import __version__
from .commands import COMMAND_MODULES
from .commands.base import OutputFormat
from .commands.runner import run_args
from .config import settings
from .utils.logger import LOG_LEVELS, LogLevelContext, coerce_level, get_logger, setup_logging

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lurecert",
        description="Robust stability certificates and counterexamples for "
        "linear systems in feedback with sector-bounded nonlinearities",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        dest="log_level",
        choices=LOG_LEVELS,
        type=str.upper,
        help=f"logging level (default {settings.log_level})",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    parser.add_argument("--seed", type=int, help=f"random seed (default {settings.seed})")
    parser.add_argument("--output", "-o", help="report path (stdout when omitted)")
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.JSON.value,
        help="trajectory output format for simulate",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors and 0 for --help/--version
        return int(e.code or 0)

    level = coerce_level(args.log_level or settings.log_level)
    setup_logging(
        level=level,
        log_file=settings.log_file,
        enable_colors=settings.enable_console_logs,
        include_timestamp=True,
        enable_file_logging=settings.enable_file_logging,
        enable_console_logging=settings.enable_console_logs,
    )
    logger.debug(f"[CLI] lurecert {__version__}, threads={settings.threads}")

    if args.verbose:
        with LogLevelContext("DEBUG"):
            return run_args(args)
    return run_args(args)


if __name__ == "__main__":
    sys.exit(main())
