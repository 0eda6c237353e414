"""
Shared types for the command modules: RunConfig, loaded inputs and results
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..config import settings
from ..engine.lti import StateSpace
from ..engine.nonlinearity import Nonlinearity
from ..engine.sector import QuadSpec
from ..engine.signals import Signal


class ExitCode(IntEnum):
    SUCCESS = 0
    NEGATIVE = 1  # not certified / violation found / decay check failed
    USAGE = 2
    NUMERICS = 3


class Command(str, Enum):
    PRESETS = "presets"
    CERTIFY = "certify"
    RATE = "rate"
    GAMMA = "gamma"
    VIOLATE = "violate"
    SIMULATE = "simulate"
    DECAY = "decay"
    VALIDATE = "validate"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """
    One CLI invocation. Ranges are not enforced here; validate_inputs reports
    every violation as a diagnostic instead.
    """

    command: Command = Field(..., description="Subcommand")
    system: Optional[Path] = Field(None, description="System file (JSON)")
    sector: Optional[Path] = Field(None, description="Sector file (JSON)")
    nonlinearity: Optional[Path] = Field(None, description="Nonlinearity file (JSON)")
    inputs: Optional[Path] = Field(None, description="Input signals / initial states (JSON)")
    horizon: Optional[int] = Field(None, description="T or T_max (settings.default_horizon when omitted)")
    rho: float = Field(1.0, description="Exponential weight")
    rho_lo: float = Field(0.5, description="Rate search lower end")
    rho_hi: float = Field(1.0, description="Rate search upper end")
    tol: float = Field(1e-3, description="Rate search tolerance")
    validate_grid: int = Field(0, description="Grid points for the monotonicity sweep")
    gamma_target: Optional[float] = Field(None, description="Gain to violate")
    grid: int = Field(default_factory=lambda: settings.default_grid, description="Frequency grid")
    frequency: bool = Field(False, description="Also run the frequency-domain screen")
    samples: int = Field(1000, description="Random samples for sector checks")
    steps: int = Field(100, description="Steps K for decay runs")
    seed: int = Field(default_factory=lambda: settings.seed, description="Random seed")
    witness: Optional[Path] = Field(None, description="Where to write a violation witness")
    output: Optional[Path] = Field(None, description="Report path (stdout when omitted)")
    output_format: OutputFormat = Field(OutputFormat.JSON, description="json or csv")

    @property
    def T_max(self) -> int:
        return settings.default_horizon if self.horizon is None else self.horizon


@dataclass
class LoadedInputs:
    G: Optional[StateSpace] = None
    M: Optional[QuadSpec] = None
    N: Optional[QuadSpec] = None
    phi: Optional[Nonlinearity] = None
    pairs: List[Tuple[Signal, Signal]] = field(default_factory=list)
    x0: List[List[float]] = field(default_factory=list)
    digests: Dict[str, str] = field(default_factory=dict)


@dataclass
class CommandResult:
    exit_code: ExitCode
    result: Dict[str, Any]
    # extra artifacts: path -> payload (dict for JSON, column dict for CSV)
    artifacts: Dict[Path, Any] = field(default_factory=dict)


def add_system_args(parser: Any, sector: bool = True) -> None:
    parser.add_argument("--system", type=Path, help="system file (JSON)")
    if sector:
        parser.add_argument("--sector", type=Path, help="sector file (JSON)")


def add_horizon_args(parser: Any, rho: bool = True) -> None:
    parser.add_argument(
        "--horizon", type=int, help=f"horizon T (default {settings.default_horizon})"
    )
    if rho:
        parser.add_argument("--rho", type=float, default=1.0, help="exponential weight in (0, 1]")
