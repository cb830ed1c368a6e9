from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from robustprod.core.config import DEFAULT_IQR_SCALE
from robustprod.enums.enums import Measure


class TrimRule(BaseModel):
    scale_factor: float = Field(default=DEFAULT_IQR_SCALE, gt=0, description="s in Q1 - s*IQR")
    numerator: Measure = Field(default=Measure.output)
    denominator: Measure = Field(default=Measure.capital)
    per_farm: bool = Field(
        default=True,
        description="Average the ratio per farm and trim whole farms",
    )

    model_config = ConfigDict(extra="ignore", frozen=True)

    @model_validator(mode="after")
    def _distinct_measures(self):
        if self.numerator == self.denominator:
            raise ValueError("numerator and denominator must differ")
        return self

    @classmethod
    def parse_ratio(cls, ratio: str, **kwargs) -> "TrimRule":
        """Build a rule from ``"output/capital"``."""
        numerator, _, denominator = ratio.partition("/")
        return cls(
            numerator=Measure(numerator.strip()),
            denominator=Measure(denominator.strip()),
            **kwargs,
        )


class TrimResult(BaseModel):
    kept_ids: List[str]
    trimmed_ids: List[str]
    q1: float
    q3: float
    lower: float
    upper: float
    per_farm: bool
    trimmed_farms: List[str] = Field(default_factory=list)

    model_config = ConfigDict(extra="ignore")
