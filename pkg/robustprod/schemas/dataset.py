from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from robustprod.enums.enums import (
    CANONICAL_MEASURES,
    DeflatorSeries,
    Measure,
    Scale,
)


class ColumnMap(BaseModel):
    """Header names of the input file for each role"""

    farm_id: str = Field(default="farm_id")
    year: str = Field(default="year")
    output: Optional[str] = Field(default="output")
    labour: Optional[str] = Field(default="labour")
    land: Optional[str] = Field(default="land")
    materials: Optional[str] = Field(
        default="materials",
        description="Precomputed materials composite",
    )
    materials_parts: List[str] = Field(
        default_factory=list,
        description="Columns summed into the materials composite at load, e.g. F72,SE300,SE305,SE336",
    )
    capital: Optional[str] = Field(default="capital")

    model_config = ConfigDict(extra="ignore", frozen=True)

    def column_for(self, measure: Measure) -> Optional[str]:
        return getattr(self, measure.value)

    @classmethod
    def fadn(cls) -> "ColumnMap":
        """FADN variable codes for field crop farms."""
        return cls(
            farm_id="ID",
            year="YEAR",
            output="SE131",
            labour="SE011",
            land="SE025",
            materials=None,
            materials_parts=["F72", "SE300", "SE305", "SE336"],
            capital="SE360",
        )


class PanelRecord(BaseModel):
    """One farm-year observation in raw units"""

    farm_id: str = Field(..., min_length=1)
    year: int = Field(...)
    output: Optional[float] = Field(default=None, gt=0, description="currency units")
    labour: Optional[float] = Field(default=None, gt=0, description="hours")
    land: Optional[float] = Field(default=None, gt=0, description="hectares")
    materials: Optional[float] = Field(default=None, gt=0, description="currency units")
    capital: Optional[float] = Field(default=None, gt=0, description="currency units")

    model_config = ConfigDict(extra="ignore", frozen=True)


class RejectedRow(BaseModel):
    row_number: int = Field(..., description="1-based data row in the source file")
    farm_id: Optional[str] = None
    year: Optional[int] = None
    reason: str

    model_config = ConfigDict(extra="ignore")


class DeflatorTable(BaseModel):
    """Price indices per series and year, normalized to 1 at the base year"""

    base_year: int
    values: Dict[DeflatorSeries, Dict[int, float]]

    model_config = ConfigDict(extra="ignore", frozen=True)

    @model_validator(mode="after")
    def _check_positive(self):
        for series, by_year in self.values.items():
            for year, value in by_year.items():
                if not value > 0:
                    raise ValueError(
                        f"index {series.value}/{year} must be positive, got {value}"
                    )
        return self

    def index(self, series: DeflatorSeries, year: int) -> Optional[float]:
        return self.values.get(series, {}).get(year)


class PanelDataset(BaseModel):
    """
    Farm x year records held in a DataFrame with columns
    ``record_id, farm_id, year`` followed by the measures in canonical order.
    """

    frame: pd.DataFrame
    scale: Scale = Scale.raw
    measures: List[Measure] = Field(default_factory=lambda: list(CANONICAL_MEASURES))
    rejects: List[RejectedRow] = Field(default_factory=list)
    base_year: Optional[int] = Field(
        default=None,
        description="Base year of the deflators once the dataset is deflated",
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def n_records(self) -> int:
        return len(self.frame)

    @property
    def record_ids(self) -> List[str]:
        return self.frame["record_id"].tolist()

    @property
    def measure_columns(self) -> List[str]:
        return [m.value for m in self.measures]
