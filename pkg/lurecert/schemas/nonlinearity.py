"""
Nonlinearity file format

    {"kind": "static_map", "map": "saturation", "level": 1.0}
    {"kind": "time_varying_gain", "gains": [...]}
    {"kind": "delay_gain", "gains": [...], "delay": 1}
    {"kind": "pair_relation", "e2": [...], "y2": [...]}
"""

from typing import Any, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..engine import nonlinearity as nl
from ..engine.nonlinearity import Nonlinearity, NonlinearityKind, StaticMap

Sequence = Union[List[float], List[List[float]]]


class NonlinearityModel(BaseModel):
    """Feedback-channel nonlinearity y2 = Phi e2"""

    model_config = ConfigDict(extra="forbid")

    kind: NonlinearityKind = Field(..., description="Nonlinearity kind")
    map: Optional[StaticMap] = Field(None, description="Static map name")
    gain: Optional[float] = Field(None, description="Gain of the linear static map")
    level: Optional[float] = Field(None, gt=0.0, description="Saturation level")
    width: Optional[float] = Field(None, gt=0.0, description="Dead-zone half width")
    a: Optional[float] = Field(None, description="Lower sector bound")
    b: Optional[float] = Field(None, description="Upper sector bound")
    gains: Optional[Sequence] = Field(None, description="Gain sequence c[0..T]")
    delay: int = Field(0, ge=0, description="Delay d of delay_gain")
    e2: Optional[Sequence] = Field(None, description="Recorded relation input")
    y2: Optional[Sequence] = Field(None, description="Recorded relation output")

    @model_validator(mode="after")
    def validate_kind_fields(self) -> "NonlinearityModel":
        if self.kind is NonlinearityKind.STATIC_MAP and self.map is None:
            raise ValueError("static_map requires 'map'")
        if self.kind in (NonlinearityKind.TIME_VARYING_GAIN, NonlinearityKind.DELAY_GAIN):
            if not self.gains:
                raise ValueError(f"{self.kind.value} requires a non-empty 'gains' list")
        if self.kind is NonlinearityKind.PAIR_RELATION and (self.e2 is None or self.y2 is None):
            raise ValueError("pair_relation requires both 'e2' and 'y2'")
        return self

    def to_nonlinearity(self) -> Nonlinearity:
        if self.kind is NonlinearityKind.STATIC_MAP:
            params: dict[str, Any] = {
                k: getattr(self, k)
                for k in ("gain", "level", "width", "a", "b")
                if getattr(self, k) is not None
            }
            return nl.static_map(self.map, **params)
        if self.kind is NonlinearityKind.TIME_VARYING_GAIN:
            return nl.time_varying_gain(self.gains)
        if self.kind is NonlinearityKind.DELAY_GAIN:
            return nl.delay_gain(self.gains, self.delay)
        return nl.pair_relation(self.e2, self.y2)
