"""
`presets`: list the table of classical sector conditions
"""

from typing import Any

from ..engine.sector import preset_table
from .base import Command, CommandResult, ExitCode, LoadedInputs, RunConfig


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("presets", help="list the preset (M, N) constructions")
    parser.set_defaults(command=Command.PRESETS)


def run_presets(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    return CommandResult(ExitCode.SUCCESS, {"presets": preset_table()})


HANDLERS = {Command.PRESETS: run_presets}
