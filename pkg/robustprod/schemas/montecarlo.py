from typing import List

from pydantic import BaseModel, ConfigDict, Field

from robustprod.core.config import DEFAULT_ALPHA, DEFAULT_IQR_SCALE, DEFAULT_MIN_RUN
from robustprod.enums.enums import DecontaminationScheme, SimVariant
from robustprod.schemas.simulation import SimConfig


class StudyConfig(BaseModel):
    """Replications of the simulated comparison with the within estimator"""

    replications: int = Field(default=200, ge=1)
    master_seed: int = Field(default=20240101, ge=0)
    variants: List[SimVariant] = Field(
        default_factory=lambda: [SimVariant.raw, SimVariant.sample1, SimVariant.sample2]
    )
    schemes: List[DecontaminationScheme] = Field(
        default_factory=lambda: [
            DecontaminationScheme.no_out,
            DecontaminationScheme.uni_out,
            DecontaminationScheme.full_out,
        ]
    )
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0, lt=1)
    iqr_scale: float = Field(default=DEFAULT_IQR_SCALE, gt=0)
    min_run: int = Field(default=DEFAULT_MIN_RUN, ge=1)
    workers: int = Field(default=1, ge=1)
    sim: SimConfig = Field(default_factory=SimConfig)

    model_config = ConfigDict(extra="ignore", frozen=True)


class ReplicationRow(BaseModel):
    replication: int
    seed: int
    variant: SimVariant
    scheme: DecontaminationScheme
    labour: float
    capital: float
    n: int
    planted_outliers_kept: int


class CellSummary(BaseModel):
    variant: SimVariant
    scheme: DecontaminationScheme
    replications: int
    labour_mean: float
    labour_sd: float
    capital_mean: float
    capital_sd: float
    n_mean: float
    share_labour_below_030: float = Field(..., description="Share of runs with labour < 0.30")
    share_capital_above_070: float = Field(..., description="Share of runs with capital > 0.70")
    planted_outliers_kept_mean: float


class StudySummary(BaseModel):
    config: StudyConfig
    cells: List[CellSummary]
    rows: List[ReplicationRow] = Field(default_factory=list, exclude=True)

    def cell(self, variant: SimVariant, scheme: DecontaminationScheme) -> CellSummary:
        return next(c for c in self.cells if c.variant == variant and c.scheme == scheme)
