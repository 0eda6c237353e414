"""
State-space system file format

    {"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]]}

A, B and C may be omitted (or empty) for a static gain D.
"""

from typing import List

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..engine.lti import StateSpace

Matrix = List[List[float]]


def _check_finite(v: Matrix) -> Matrix:
    for i, row in enumerate(v):
        for j, entry in enumerate(row):
            if not np.isfinite(entry):
                raise ValueError(f"entry [{i}][{j}] is not finite")
    return v


class SystemModel(BaseModel):
    """Discrete-time realization x+ = A x + B u, y = C x + D u"""

    A: Matrix = Field(default_factory=list, description="State matrix (n x n)")
    B: Matrix = Field(default_factory=list, description="Input matrix (n x m)")
    C: Matrix = Field(default_factory=list, description="Output matrix (p x n)")
    D: Matrix = Field(..., min_length=1, description="Feedthrough matrix (p x m)")

    @field_validator("A", "B", "C", "D")
    @classmethod
    def validate_finite(cls, v: Matrix) -> Matrix:
        return _check_finite(v)

    def to_state_space(self) -> StateSpace:
        return StateSpace(self.A, self.B, self.C, self.D)

    @classmethod
    def from_state_space(cls, G: StateSpace) -> "SystemModel":
        return cls(**G.to_dict())
