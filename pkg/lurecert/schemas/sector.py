"""
Sector file format

Exactly one of:
    {"preset": "small_gain", "params": {"gamma1": 0.5, "gamma2": 0.5}}
    {"M": [[...], [...]], "feedback": "positive"}
    {"interval": [a, b]}

An explicit G-side "N" may accompany any of them (used by `gamma` and the
relaxed check). "side", when present, must be "phi".
"""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..engine.sector import (
    Feedback,
    PresetName,
    QuadSpec,
    SectorPair,
    g_spec,
    phi_spec,
    preset,
    sector_interval_to_M,
)

Matrix2 = List[List[float]]


def _check_symmetric(v: Optional[Matrix2], name: str) -> Optional[Matrix2]:
    if v is None:
        return v
    if len(v) != 2 or any(len(row) != 2 for row in v):
        raise ValueError(f"{name} must be a 2x2 matrix")
    if v[0][1] != v[1][0]:
        raise ValueError(f"{name} is not symmetric: {name}[0][1]={v[0][1]} != {name}[1][0]={v[1][0]}")
    return v


class SectorModel(BaseModel):
    """Quadratic constraint on the nonlinearity (and optionally on G)"""

    model_config = ConfigDict(extra="forbid")

    preset: Optional[PresetName] = Field(None, description="Preset name")
    params: Dict[str, float] = Field(default_factory=dict, description="Preset parameters")
    M: Optional[Matrix2] = Field(None, description="Explicit phi-side matrix")
    interval: Optional[Tuple[float, float]] = Field(None, description="Pointwise sector [a, b]")
    N: Optional[Matrix2] = Field(None, description="Explicit G-side matrix")
    feedback: Feedback = Field(Feedback.POSITIVE, description="Feedback sign convention")
    side: Literal["phi"] = Field("phi", description="M always constrains the nonlinearity")

    @field_validator("M")
    @classmethod
    def validate_M(cls, v: Optional[Matrix2]) -> Optional[Matrix2]:
        return _check_symmetric(v, "M")

    @field_validator("N")
    @classmethod
    def validate_N(cls, v: Optional[Matrix2]) -> Optional[Matrix2]:
        return _check_symmetric(v, "N")

    @model_validator(mode="after")
    def validate_source(self) -> "SectorModel":
        given = [name for name in ("preset", "M", "interval") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"exactly one of preset, M, interval is required (got {given or 'none'})")
        if self.interval is not None and not self.interval[0] < self.interval[1]:
            raise ValueError(f"interval needs a < b, got {list(self.interval)}")
        return self

    def to_pair(self) -> Tuple[QuadSpec, Optional[QuadSpec]]:
        """(M, N or None) in the file's feedback convention"""
        if self.preset is not None:
            pair: SectorPair = preset(self.preset, **self.params)
            M, N = pair.M, pair.N
        elif self.interval is not None:
            M, N = sector_interval_to_M(*self.interval), None
        else:
            M, N = phi_spec(self.M), None
        if self.N is not None:
            N = g_spec(self.N)
        if self.feedback is Feedback.NEGATIVE:
            M = QuadSpec(M.K, M.side, Feedback.NEGATIVE)
            N = None if N is None else QuadSpec(N.K, N.side, Feedback.NEGATIVE)
        return M, N
