"""
`certify`, `rate` and `gamma`: sufficiency-side commands
"""

from typing import Any

from ..engine.certify import (
    Certificate,
    best_rate,
    certify,
    check_frequency_condition,
    e_gain_bound,
    gamma_bound,
    relaxed_certify,
)
from ..engine.errors import CompatibilityError, FrequencyDomainError
from ..engine.sector import compatibility
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
    parser = subparsers.add_parser("certify", help="search a certificate N(tau) for (G, M)")
    add_system_args(parser)
    add_horizon_args(parser)
    parser.add_argument("--grid", type=int, help="frequency grid for --frequency")
    parser.add_argument(
        "--frequency", action="store_true", help="also run the frequency-domain screen"
    )
    parser.set_defaults(command=Command.CERTIFY)

    parser = subparsers.add_parser("rate", help="smallest certified exponential rate rho")
    add_system_args(parser)
    add_horizon_args(parser, rho=False)
    parser.add_argument("--rho-lo", dest="rho_lo", type=float, default=0.5)
    parser.add_argument("--rho-hi", dest="rho_hi", type=float, default=1.0)
    parser.add_argument("--tol", type=float, default=1e-3)
    parser.add_argument(
        "--validate-grid",
        dest="validate_grid",
        type=int,
        default=0,
        help="grid points for the rho-monotonicity cross-check",
    )
    parser.set_defaults(command=Command.RATE)

    parser = subparsers.add_parser("gamma", help="closed-form gain bound for (M, N)")
    add_system_args(parser)
    add_horizon_args(parser)
    parser.set_defaults(command=Command.GAMMA)


def run_certify(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    assert loaded.G is not None and loaded.M is not None
    outcome = certify(loaded.G, loaded.M, config.T_max, Weight(config.rho))
    result = outcome.to_report()
    if isinstance(outcome, Certificate):
        result["certified"] = True
        result["e_gain"] = e_gain_bound(outcome.gamma)
        if config.frequency:
            try:
                screen = check_frequency_condition(
                    loaded.G, outcome.N, config.grid, Weight(config.rho)
                )
                result["frequency_screen"] = {
                    "passed": screen.passed,
                    "min_eig": screen.min_eig,
                    "omega_worst": screen.omega_worst,
                    "grid": screen.grid,
                }
            except FrequencyDomainError as e:
                logger.warning(f"[CLI] frequency screen skipped: {e}")
                result["frequency_screen"] = None
        return CommandResult(ExitCode.SUCCESS, result)
    return CommandResult(ExitCode.NEGATIVE, result)


def run_rate(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    assert loaded.G is not None and loaded.M is not None
    rate = best_rate(
        loaded.G,
        loaded.M,
        config.rho_lo,
        config.rho_hi,
        config.tol,
        config.T_max,
        validate=config.validate_grid,
    )
    if rate is None:
        return CommandResult(
            ExitCode.NEGATIVE, {"rho_star": None, "rho_hi": config.rho_hi, "certified": False}
        )
    return CommandResult(ExitCode.SUCCESS, rate.to_report())


def run_gamma(config: RunConfig, loaded: LoadedInputs) -> CommandResult:
    assert loaded.M is not None
    if loaded.N is None:
        raise CompatibilityError("gamma needs an N: use a preset or give 'N' in the sector file")
    ok, eta = compatibility(loaded.M, loaded.N)
    result: dict = {"M": loaded.M.K.tolist(), "N": loaded.N.K.tolist(), "compatible": ok}
    if not ok:
        result["lambda_max"] = -eta
        return CommandResult(ExitCode.NEGATIVE, result)
    gb = gamma_bound(loaded.M, loaded.N)
    result.update({"eta": gb.eta, "r": gb.r, "q": gb.q, "gamma": gb.gamma})
    if loaded.G is None:
        return CommandResult(ExitCode.SUCCESS, result)

    outcome, dominated = relaxed_certify(loaded.G, loaded.N, loaded.M, config.T_max, config.rho)
    result["certified"] = isinstance(outcome, Certificate)
    result["dominated_by_family"] = dominated
    code = ExitCode.SUCCESS if isinstance(outcome, Certificate) else ExitCode.NEGATIVE
    return CommandResult(code, result)


HANDLERS = {
    Command.CERTIFY: run_certify,
    Command.RATE: run_rate,
    Command.GAMMA: run_gamma,
}
