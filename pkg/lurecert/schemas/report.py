"""
Report envelope written by every command
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CertificateReport(BaseModel):
    method: str = Field(..., description="toeplitz_exact or frequency_asymptotic")
    tau: float = Field(..., gt=0.0)
    eta: float
    r: float
    q: float
    gamma: float = Field(..., gt=0.0)
    horizon: int = Field(..., ge=0)
    rho: float = Field(..., gt=0.0, le=1.0)
    N: List[List[float]]
    M: List[List[float]]
    feedback: str


class WitnessReport(BaseModel):
    gamma_target: float = Field(..., gt=0.0)
    T: int = Field(..., ge=0)
    rho: float
    sigma0: float
    sigma1: float
    ratio: Optional[float] = Field(None, description="null when ||u|| = 0")
    u: List[List[float]]
    y: List[List[float]]
    e: List[List[float]]
    tau_star: float
    lambda_star: float
    operator_realizable: bool
    gains: Optional[List[List[float]]] = None
    feedback: str


class Report(BaseModel):
    tool: str = Field("lurecert", description="Producing tool")
    version: str = Field(..., description="Tool version")
    command: str = Field(..., description="Subcommand that produced the report")
    inputs: Dict[str, str] = Field(default_factory=dict, description="sha256 of each input file")
    result: Dict[str, Any] = Field(default_factory=dict, description="Command result")
    exit_code: int = Field(..., ge=0, le=3)
