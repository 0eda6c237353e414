"""
Command-line subcommands; each module exposes register(subparsers)
"""

from . import certify, presets, simulate, validate, violate

COMMAND_MODULES = (presets, certify, violate, simulate, validate)

__all__ = ["COMMAND_MODULES"]
