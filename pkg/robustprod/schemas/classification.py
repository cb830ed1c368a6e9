from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from robustprod.enums.enums import OutlierLabel


class DominanceBoundary(BaseModel):
    """Maximal (upper) and minimal (lower) non-outliers under componentwise order"""

    upper: np.ndarray = Field(..., description="Upper frontier points, k x p")
    lower: np.ndarray = Field(..., description="Lower frontier points, k x p")
    upper_ids: List[str]
    lower_ids: List[str]
    dims: List[str]

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class OutlierClassification(BaseModel):
    labels: Dict[str, OutlierLabel]
    small: int
    large: int
    neither: int

    model_config = ConfigDict(extra="ignore")

    @property
    def total(self) -> int:
        return self.small + self.large + self.neither

    def ids_with(self, *labels: OutlierLabel) -> List[str]:
        wanted = set(labels)
        return [record_id for record_id, label in self.labels.items() if label in wanted]

    def counts(self) -> Dict[str, int]:
        return {"small": self.small, "large": self.large, "neither": self.neither}
