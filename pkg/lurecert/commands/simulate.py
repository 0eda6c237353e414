"""
`simulate` and `decay`: time-domain runs of the interconnection
"""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ..engine.errors import InputError, KindError
from ..engine.nonlinearity import NonlinearityKind
from ..engine.signals import SipConfig, Weight, seminorm
from ..engine.simulator import (
    check_pointwise_sector,
    cumulative_sector_margin,
    interconnect,
    verify_exponential_decay,
)
from ..utils.logger import get_logger
from ..utils.parallel import parallel_map
from .base import (
    Command,
    CommandResult,
    ExitCode,
    LoadedInputs,
    OutputFormat,
    RunConfig,
    add_horizon_args,
)

logger = get_logger(__name__)


def register(subparsers: Any) -> None:
    parser = subparsers.add_parser("simulate", help="simulate the loop for given inputs")
    parser.add_argument("--system", type=Path, help="system file (JSON)")
    parser.add_argument("--nonlinearity", type=Path, help="nonlinearity file (JSON)")
    parser.add_argument("--inputs", type=Path, help="input signals file (JSON)")
    parser.add_argument("--sector", type=Path, help="optional sector file to check against")
    parser.add_argument("--samples", type=int, default=1000)
    add_horizon_args(parser)
    parser.set_defaults(command=Command.SIMULATE)

    parser = subparsers.add_parser("decay", help="check ||x[k]|| <= c rho^k ||x[0]|| for u = 0")
    parser.add_argument("--system", type=Path, help="system file (JSON)")
    parser.add_argument("--nonlinearity", type=Path, help="nonlinearity file (JSON)")
    parser.add_argument("--inputs", type=Path, help="file with initial states under 'x0'")
    parser.add_argument("--rho", type=float, default=1.0)
    parser.add_argument("--steps", type=int, default=100, help="number of steps K")
    parser.set_defaults(command=Command.DECAY)


def trajectory_path(config: RunConfig, index: int) -> Path:
    assert config.output is not None
    return config.output.with_name(f"{config.output.stem}-{index}.csv")


def run_simulate(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    assert loaded.G is not None and loaded.phi is not None
    G, phi = loaded.G, loaded.phi
    weight = Weight(config.rho)

    def one(pair):
        u1, u2 = pair
        T = min(u1.horizon, u2.horizon, config.horizon) if config.horizon is not None else None
        return interconnect(G, phi, u1, u2, T)

    trajectories = parallel_map(one, loaded.pairs)
    runs: List[Dict[str, Any]] = []
    artifacts: Dict[Path, Any] = {}
    for i, traj in enumerate(trajectories):
        cfg = SipConfig(traj.horizon, weight)
        nu = seminorm(traj.u, cfg)
        run: Dict[str, Any] = {
            "horizon": traj.horizon,
            "norm_u": nu,
            "norm_y": seminorm(traj.y, cfg),
            "norm_e": seminorm(traj.e, cfg),
            "ratio": None if nu == 0.0 else seminorm(traj.y, cfg) / nu,
            "residual": traj.residual,
        }
        if loaded.M is not None:
            run["sector_margin"] = cumulative_sector_margin(traj, loaded.M, cfg)
        runs.append(run)
        if config.output_format is OutputFormat.CSV:
            artifacts[trajectory_path(config, i)] = traj.to_columns()

    ratios = [r["ratio"] for r in runs if r["ratio"] is not None]
    result: Dict[str, Any] = {
        "runs": runs,
        "empirical_gain": max(ratios) if ratios else None,
    }
    if loaded.M is not None:
        try:
            result["pointwise_sector"] = check_pointwise_sector(
                phi, loaded.M, config.samples, G.n_inputs, np.random.default_rng(config.seed)
            )
        except KindError:
            result["pointwise_sector"] = None
    if artifacts:
        result["trajectory_files"] = [str(p) for p in artifacts]
    return CommandResult(ExitCode.SUCCESS, result, artifacts)


def run_decay(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    assert loaded.G is not None and loaded.phi is not None
    if loaded.phi.kind is NonlinearityKind.PAIR_RELATION:
        raise KindError("decay runs need an operator, not a recorded relation")
    if not loaded.x0:
        raise InputError("decay needs initial states under 'x0' in the inputs file")
    decay = verify_exponential_decay(
        loaded.G, loaded.phi, Weight(config.rho), loaded.x0, config.steps
    )
    result = decay.to_report()
    result.update({"rho": config.rho, "steps": config.steps})
    return CommandResult(ExitCode.SUCCESS if decay.passed else ExitCode.NEGATIVE, result)


HANDLERS = {Command.SIMULATE: run_simulate, Command.DECAY: run_decay}
