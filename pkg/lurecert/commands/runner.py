"""
Command runner: input validation, dispatch, report envelope and exit codes

    0  certified / success / nothing to report
    1  not certified, violation found, or decay check failed
    2  usage or input error (every diagnostic is listed in the report)
    3  numerical failure
"""

import argparse
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

from pydantic import ValidationError

from .. import __version__
from ..engine.errors import LureCertError
from ..schemas.validation import (
    format_validation_error,
    validate_input_file,
    validate_nonlinearity,
    validate_sector,
    validate_system,
)
from ..utils.io import file_digest, read_json, write_columns_csv, write_report
from ..utils.logger import get_logger
from . import certify, presets, simulate, violate
from .base import (
    Command,
    CommandResult,
    ExitCode,
    LoadedInputs,
    OutputFormat,
    RunConfig,
)

logger = get_logger(__name__)

Handler = Callable[[RunConfig, LoadedInputs], CommandResult]

HANDLERS: Dict[Command, Handler] = {
    **presets.HANDLERS,
    **certify.HANDLERS,
    **violate.HANDLERS,
    **simulate.HANDLERS,
}

REQUIRED_FILES: Dict[Command, Tuple[str, ...]] = {
    Command.PRESETS: (),
    Command.CERTIFY: ("system", "sector"),
    Command.RATE: ("system", "sector"),
    Command.GAMMA: ("sector",),
    Command.VIOLATE: ("system", "sector"),
    Command.SIMULATE: ("system", "nonlinearity", "inputs"),
    Command.DECAY: ("system", "nonlinearity", "inputs"),
    Command.VALIDATE: (),
}

GLOBAL_ARGS = ("log_level", "verbose", "format")


def build_config(args: argparse.Namespace) -> RunConfig:
    """RunConfig from parsed CLI arguments; unset options fall back to defaults"""
    values = {k: v for k, v in vars(args).items() if k not in GLOBAL_ARGS and v is not None}
    values["output_format"] = getattr(args, "format", None) or OutputFormat.JSON
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ValueError("; ".join(format_validation_error(e)))


def _check_ranges(config: RunConfig) -> List[str]:
    diags: List[str] = []
    if config.horizon is not None and config.horizon < 0:
        diags.append(f"--horizon: must be >= 0, got {config.horizon}")
    if not 0.0 < config.rho <= 1.0:
        diags.append(f"--rho: must lie in (0, 1], got {config.rho}")
    if config.grid < 1:
        diags.append(f"--grid: must be >= 1, got {config.grid}")
    if config.samples < 1:
        diags.append(f"--samples: must be >= 1, got {config.samples}")
    if config.command is Command.RATE:
        if not 0.0 < config.rho_lo < config.rho_hi <= 1.0:
            diags.append(
                f"--rho-lo/--rho-hi: need 0 < rho_lo < rho_hi <= 1, got ({config.rho_lo}, {config.rho_hi})"
            )
        if not config.tol > 0.0:
            diags.append(f"--tol: must be > 0, got {config.tol}")
        if config.validate_grid < 0:
            diags.append(f"--validate-grid: must be >= 0, got {config.validate_grid}")
    if config.command is Command.VIOLATE:
        if config.gamma_target is None:
            diags.append("--gamma: required for violate")
        elif not config.gamma_target > 0.0:
            diags.append(f"--gamma: must be > 0, got {config.gamma_target}")
    if config.command is Command.DECAY and config.steps < 1:
        diags.append(f"--steps: must be >= 1, got {config.steps}")
    if config.output_format is OutputFormat.CSV:
        if config.command is not Command.SIMULATE:
            diags.append("--format csv: only simulate writes CSV trajectories")
        elif config.output is None:
            diags.append("--format csv: needs --output to name the trajectory files")
    return diags


def _load_file(name: str, path: Path, parse: Callable[[Any], Any], diags: List[str]) -> Any:
    try:
        return parse(read_json(path))
    except FileNotFoundError:
        diags.append(f"{name}: file not found: {path}")
    except (ValueError, LureCertError) as e:
        diags.append(f"{name} ({path}): {e}")
    return None


def load_inputs(config: RunConfig) -> Tuple[LoadedInputs, List[str]]:
    """Parse every file the command uses; returns the loaded objects and all diagnostics"""
    diags = _check_ranges(config)
    loaded = LoadedInputs()

    for name in REQUIRED_FILES[config.command]:
        if getattr(config, name) is None:
            diags.append(f"--{name}: required for {config.command.value}")

    if config.system is not None:
        loaded.G = _load_file(
            "system", config.system, lambda d: validate_system(d).to_state_space(), diags
        )
    if config.sector is not None:
        pair = _load_file("sector", config.sector, lambda d: validate_sector(d).to_pair(), diags)
        if pair is not None:
            loaded.M, loaded.N = pair
    if config.nonlinearity is not None:
        loaded.phi = _load_file(
            "nonlinearity",
            config.nonlinearity,
            lambda d: validate_nonlinearity(d).to_nonlinearity(),
            diags,
        )
    if config.inputs is not None:
        model = _load_file("inputs", config.inputs, validate_input_file, diags)
        if model is not None:
            try:
                loaded.pairs = model.signal_pairs()
            except (ValueError, LureCertError) as e:
                diags.append(f"inputs ({config.inputs}): {e}")
            loaded.x0 = model.x0

    for name in ("system", "sector", "nonlinearity", "inputs"):
        path = getattr(config, name)
        if path is not None and Path(path).is_file():
            loaded.digests[name] = file_digest(path)

    diags.extend(_check_dimensions(config, loaded))
    return loaded, diags


def _check_dimensions(config: RunConfig, loaded: LoadedInputs) -> List[str]:
    diags: List[str] = []
    G = loaded.G
    if G is None:
        return diags
    if config.command is not Command.GAMMA and not G.is_square:
        diags.append(f"system: G must be square for the loop, got {G.n_outputs}x{G.n_inputs}")
        return diags
    m = G.n_inputs
    if loaded.phi is not None and loaded.phi.dim is not None and loaded.phi.dim != m:
        diags.append(f"nonlinearity: acts on dim {loaded.phi.dim}, but G has dim {m}")
    for i, (u1, u2) in enumerate(loaded.pairs):
        if u1.dim != m or u2.dim != m:
            diags.append(f"inputs.pairs.{i}: signals have dims ({u1.dim}, {u2.dim}), G has dim {m}")
        if u1.horizon != u2.horizon:
            diags.append(f"inputs.pairs.{i}: u1 and u2 horizons differ ({u1.horizon} vs {u2.horizon})")
    for i, x0 in enumerate(loaded.x0):
        if len(x0) != G.n_states:
            diags.append(f"inputs.x0.{i}: has {len(x0)} entries, G has {G.n_states} states")
    return diags


def validate_inputs(config: RunConfig) -> List[str]:
    """All schema, range and dimension violations; empty iff run may proceed"""
    return load_inputs(config)[1]


def _envelope(config: RunConfig, digests: Dict[str, str], result: Dict[str, Any], code: int) -> Dict[str, Any]:
    return {
        "tool": "lurecert",
        "version": __version__,
        "command": config.command.value,
        "inputs": dict(sorted(digests.items())),
        "result": result,
        "exit_code": int(code),
    }


def _write_artifacts(artifacts: Dict[Path, Any]) -> None:
    for path, payload in artifacts.items():
        if Path(path).suffix.lower() == ".csv":
            write_columns_csv(payload, path)
        else:
            write_report(payload, path)
        logger.info(f"[CLI] wrote {path}")


def execute(config: RunConfig) -> Tuple[int, Dict[str, Any]]:
    """Run one command and return (exit code, report) without writing the report"""
    loaded, diags = load_inputs(config)

    if config.command is Command.VALIDATE:
        code = ExitCode.SUCCESS if not diags else ExitCode.USAGE
        return code, _envelope(config, loaded.digests, {"valid": not diags, "diagnostics": diags}, code)

    if diags:
        for d in diags:
            logger.error(f"[CLI] {d}")
        return ExitCode.USAGE, _envelope(config, loaded.digests, {"diagnostics": diags}, ExitCode.USAGE)

    handler = HANDLERS[config.command]
    try:
        outcome = handler(config, loaded)
    except ArithmeticError as e:
        logger.error(f"[CLI] numerical failure: {e}")
        result = {"error": type(e).__name__, "message": str(e)}
        return ExitCode.NUMERICS, _envelope(config, loaded.digests, result, ExitCode.NUMERICS)
    except (LureCertError, ValueError) as e:
        logger.error(f"[CLI] {type(e).__name__}: {e}")
        result = {"error": type(e).__name__, "message": str(e)}
        return ExitCode.USAGE, _envelope(config, loaded.digests, result, ExitCode.USAGE)

    _write_artifacts(outcome.artifacts)
    return outcome.exit_code, _envelope(config, loaded.digests, outcome.result, outcome.exit_code)


def run(config: RunConfig) -> int:
    """Execute the command, write the report (to --output or stdout) and return the exit code"""
    code, report = execute(config)
    write_report(report, config.output)
    logger.debug(f"[CLI] {config.command.value} finished with exit code {int(code)}")
    return int(code)


def run_args(args: argparse.Namespace) -> int:
    try:
        config = build_config(args)
    except ValueError as e:
        logger.error(f"[CLI] invalid arguments: {e}")
        return int(ExitCode.USAGE)
    return run(config)


__all__: List[str] = ["RunConfig", "build_config", "execute", "run", "run_args", "validate_inputs"]