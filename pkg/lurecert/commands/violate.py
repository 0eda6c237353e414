"""
`violate`: counterexample synthesis when no certificate exists
"""

from pathlib import Path
from typing import Any, Optional

from ..engine.certify import ViolationWitness, find_violation
from ..engine.signals import Weight
from ..utils.logger import get_logger
from .base import (
    Command,
    CommandResult,
    ExitCode,
    LoadedInputs,
    RunConfig,
    add_horizon_args,
    add_system_args,
)

logger = get_logger(__name__)


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser(
        "violate", help="search a sector-consistent loop signal with ||y|| > gamma ||u||"
    )
    add_system_args(parser)
    add_horizon_args(parser)
    parser.add_argument("--gamma", dest="gamma_target", type=float, help="gain to violate")
    parser.add_argument("--witness", type=Path, help="witness JSON path")
    parser.set_defaults(command=Command.VIOLATE)


def witness_path(config: RunConfig) -> Optional[Path]:
    if config.witness is not None:
        return config.witness
    if config.output is not None:
        return config.output.with_name(config.output.stem + ".witness.json")
    return None


def run_violate(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    assert loaded.G is not None and loaded.M is not None and config.gamma_target is not None
    weight = Weight(config.rho)
    witness: Optional[ViolationWitness] = None
    for T in range(config.T_max + 1):
        witness = find_violation(loaded.G, loaded.M, config.gamma_target, T, weight)
        if witness is not None:
            break

    if witness is None:
        logger.info(f"[CLI] no violation of gamma={config.gamma_target:g} up to T={config.T_max}")
        return CommandResult(
            ExitCode.SUCCESS,
            {"violation": False, "gamma_target": config.gamma_target, "horizon": config.T_max},
        )

    report = witness.to_report()
    result = {"violation": True, "witness": report}
    artifacts = {}
    path = witness_path(config)
    if path is not None:
        artifacts[path] = report
        result["witness_file"] = str(path)
    return CommandResult(ExitCode.NEGATIVE, result, artifacts)


HANDLERS = {Command.VIOLATE: run_violate}
