"""
`validate`: check input files and options without running anything
"""

from pathlib import Path
from typing import Any

from .base import Command


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("validate", help="report schema, range and dimension problems")
    for name in ("system", "sector", "nonlinearity", "inputs"):
        parser.add_argument(f"--{name}", type=Path, help=f"{name} file (JSON)")
    parser.add_argument("--horizon", type=int)
    parser.add_argument("--rho", type=float, default=1.0)
    parser.set_defaults(command=Command.VALIDATE)
