from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from robustprod.core.config import DEFAULT_ALPHA, DEFAULT_IQR_SCALE, DEFAULT_MIN_RUN
from robustprod.enums.enums import DecontaminationScheme, Measure
from robustprod.schemas.estimation import EstimationResult, ModelSpec


class PipelineConfig(BaseModel):
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0, lt=1)
    standardize: bool = Field(default=False)
    dims: Optional[List[Measure]] = Field(
        default=None,
        description="Cloud dimensions; all measures of the panel when unset",
    )
    iqr_scale: float = Field(default=DEFAULT_IQR_SCALE, gt=0)
    ratio: str = Field(default="output/capital", pattern=r"^\s*\w+\s*/\s*\w+\s*$")
    per_farm: bool = Field(default=True)
    keep_neither: bool = Field(
        default=True,
        description="small-large sample keeps the outliers labelled neither",
    )
    min_run: int = Field(default=DEFAULT_MIN_RUN, ge=1)
    spec: Optional[ModelSpec] = Field(
        default=None,
        description="Model; derived from the panel's measures when unset",
    )
    schemes: List[DecontaminationScheme] = Field(
        default_factory=lambda: list(DecontaminationScheme)
    )
    seed: Optional[int] = Field(default=None, ge=0)

    model_config = ConfigDict(extra="ignore", frozen=True)


class DecontaminationSummary(BaseModel):
    n: int
    core: int
    non_outliers: int
    outliers: int
    breakdown_bound: int
    w_crit: Optional[float] = None
    reweighting_note: Optional[str] = None


class TrimSummary(BaseModel):
    kept: int
    trimmed: int
    lower: float
    upper: float
    per_farm: bool


class SampleReport(BaseModel):
    scheme: DecontaminationScheme
    selected: int = Field(..., description="Records chosen by the scheme")
    n_records: int = Field(..., description="Records left after the consecutive-run filter")
    n_farms: int
    estimation: EstimationResult
    record_ids: List[str] = Field(default_factory=list, exclude=True)


class PipelineReport(BaseModel):
    provenance: Dict[str, Any]
    stage_counts: Dict[str, int]
    decontamination: DecontaminationSummary
    classification: Dict[str, int]
    trim: TrimSummary
    samples: List[SampleReport]

    model_config = ConfigDict(extra="ignore")

    def sample(self, scheme: DecontaminationScheme) -> SampleReport:
        return next(s for s in self.samples if s.scheme == scheme)
