"""Convergence report schema, serialized as JSON"""
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class LevelRecord(BaseModel):
    n: int
    h: float
    e_u: float = Field(ge=0)
    e_p: float = Field(ge=0)
    e_div: float = Field(ge=0)
    e_V: float = Field(ge=0)
    e_cell: float = Field(default=0.0, ge=0)
    seconds: float = 0.0


class RateRecord(BaseModel):
    e_u: float
    e_p: float
    e_div: float
    e_V: float
    e_cell: float = 0.0


class ConvergenceReport(BaseModel):
    scheme: str
    case: str
    closure: Optional[str] = None
    split: str = "diagonal"
    levels: list[LevelRecord]
    rates: RateRecord
    flags: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_levels(self) -> "ConvergenceReport":
        hs = [level.h for level in self.levels]
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("mesh sizes must be strictly decreasing across levels")
        return self


class SolveSummary(BaseModel):
    """Result of one solve as returned by the CLI --json option and the HTTP route"""
    scheme: str
    case: str
    closure: Optional[str] = None
    num_cells: int
    num_edges: int
    h: float
    e_u: float
    e_p: float
    e_div: float
    e_V: float
    e_cell: float
    conservation: float
    method: str
    iterations: int
    residual: float
    seconds: float
