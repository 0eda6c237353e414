"""
Input file format

    {"u1": [...], "u2": [...]}                       a single input pair
    {"pairs": [{"u1": [...], "u2": [...]}, ...]}     several pairs
    {"x0": [[...], ...]}                             initial states for decay runs

Scalar signals may be flat lists; vector signals are lists of rows. A missing
u2 is taken as zero.
"""

from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from ..engine.signals import Signal

Sequence = Union[List[float], List[List[float]]]


class SignalPairModel(BaseModel):
    u1: Sequence = Field(..., min_length=1, description="External input to G's channel")
    u2: Optional[Sequence] = Field(None, description="External input to Phi's channel")

    def to_signals(self) -> Tuple[Signal, Signal]:
        u1 = Signal.from_array(self.u1)
        u2 = Signal.zeros(u1.horizon, u1.dim) if self.u2 is None else Signal.from_array(self.u2)
        return u1, u2


class InputFileModel(BaseModel):
    u1: Optional[Sequence] = Field(None, description="Single-pair shorthand")
    u2: Optional[Sequence] = Field(None, description="Single-pair shorthand")
    pairs: List[SignalPairModel] = Field(default_factory=list, description="Input pairs")
    x0: List[List[float]] = Field(default_factory=list, description="Initial states")

    @model_validator(mode="after")
    def validate_pairs(self) -> "InputFileModel":
        if self.u1 is not None:
            if self.pairs:
                raise ValueError("give either u1/u2 or pairs, not both")
            self.pairs = [SignalPairModel(u1=self.u1, u2=self.u2)]
        elif self.u2 is not None:
            raise ValueError("u2 given without u1")
        return self

    def signal_pairs(self) -> List[Tuple[Signal, Signal]]:
        return [p.to_signals() for p in self.pairs]
