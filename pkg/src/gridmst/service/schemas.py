"""Wire models for the HTTP service.

Exact rationals travel as "num/den" strings so nothing is lost to
binary floats; floats appear only where the quantity is inherently
sampled or transcendental.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


def fraction_str(value: Fraction) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


class TreeJson(BaseModel):
    n: int = Field(ge=1)
    branches: list[int]


class FamilyParams(BaseModel):
    family: str
    n: Optional[int] = None
    k: Optional[int] = None
    seed: Optional[int] = None


class TreeRequest(FamilyParams):
    include_ascii: bool = False


class DegreeMassRow(BaseModel):
    d: int
    count: int
    mass: str


class TreeStats(BaseModel):
    branch_count: int
    chord_count: int
    total_links: int
    avg_branch_degree: str
    avg_chord_degree: str
    avg_stretch: str
    expected_cut_edges: str
    neighbor_overlap: str
    boundedness: str
    degree_mass: list[DegreeMassRow]


class TreeResponse(BaseModel):
    tree: TreeJson
    stats: TreeStats
    ascii_art: Optional[str] = None


class ProbRequest(BaseModel):
    tree: Optional[TreeJson] = None
    family: Optional[FamilyParams] = None
    mode: Literal["exact", "exact-dual", "estimate"] = "exact"
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    max_exact_m: int = Field(default=12, ge=1)
    max_exact_n: int = Field(default=12, ge=1)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.tree is None) == (self.family is None):
            raise ValueError("provide exactly one of 'tree' or 'family'")
        if self.mode == "estimate":
            if self.samples is None or self.seed is None:
                raise ValueError("estimate mode needs 'samples' and 'seed'")
        return self


class ProbResponse(BaseModel):
    mode: str
    log_prob: float
    probability: Optional[str] = None
    samples: Optional[int] = None
    log_std_err: Optional[float] = None
    seed: Optional[int] = None


class ScatterRequest(BaseModel):
    n: int = Field(ge=4)
    trees_per_sampler: int = Field(default=100, ge=1)
    samples: int = Field(default=10000, ge=1)
    seed: int = Field(default=0, ge=0)


class ScatterRowJson(BaseModel):
    sampler: str
    avg_stretch: float
    log_prob_estimate: float


class ScatterResponse(BaseModel):
    n: int
    trees_per_sampler: int
    samples: int
    seed: int
    pearson: float
    rows: list[ScatterRowJson]


class DecayRequest(BaseModel):
    family: str
    d_max: Optional[int] = Field(default=None, ge=3)
    include_series: bool = False
    series_points: int = Field(default=101, ge=2, le=100001)


class MassTableRow(BaseModel):
    d: int
    mass: str


class DecayResponse(BaseModel):
    family: str
    d_max: Optional[int]
    f_bar: float
    e_f_bar: float
    q_lower: float
    p_table: Optional[list[MassTableRow]] = None
    series: Optional[list[tuple[float, float]]] = None


class ConjectureRequest(BaseModel):
    family: str
    sizes: list[int] = Field(min_length=1)
    samples: int = Field(default=1000, ge=2)
    seed: int = Field(default=0, ge=0)


class ConjectureRowJson(BaseModel):
    n: int
    mean_log_a: float
    sigma_sq: float
    scaled_half_variance: float
    implied_ratio: float


class ConjectureResponse(BaseModel):
    family: str
    samples: int
    seed: int
    rows: list[ConjectureRowJson]


class HealthResponse(BaseModel):
    status: str
    version: str
