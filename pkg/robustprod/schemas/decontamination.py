from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from robustprod.core.config import DEFAULT_ALPHA
from robustprod.enums.enums import RebuildMode
from robustprod.schemas.cloud import MstResult


class PruneConfig(BaseModel):
    alpha: float = Field(
        default=DEFAULT_ALPHA,
        gt=0,
        lt=1,
        description="Probability used for the critical edge length",
    )
    standardize: bool = Field(
        default=False,
        description="z-score every coordinate before building the tree",
    )
    rebuild: RebuildMode = Field(
        default=RebuildMode.mst,
        description="Edge universe reattached during reweighting",
    )

    model_config = ConfigDict(extra="ignore", frozen=True, use_enum_values=False)


class PruneStep(BaseModel):
    source: str
    target: str
    weight: float
    largest_component: int = Field(
        ..., description="Size of the largest component after the deletion"
    )

    model_config = ConfigDict(frozen=True)


class CorePruning(BaseModel):
    """Outcome of pruning the tree down to the robust core (indices, not ids)"""

    core: List[int]
    core_edges: List[int] = Field(
        ..., description="Positions in the MstResult edge arrays forming E'"
    )
    deleted_edges: List[int]
    largest_after_deletion: List[int]
    component_sizes: List[int]
    breakdown_bound: int

    model_config = ConfigDict(frozen=True)


class DecontaminationResult(BaseModel):
    n: int
    p: int
    alpha: float
    breakdown_bound: int
    core_ids: List[str]
    non_outlier_ids: List[str]
    outlier_ids: List[str]
    w_crit: Optional[float] = Field(
        default=None,
        description="Critical edge length, unset when reweighting is undefined",
    )
    edge_mean: Optional[float] = None
    edge_std: Optional[float] = None
    m: int = Field(..., description="Number of edges in the core subtree E'")
    component_sizes: List[int] = Field(
        default_factory=list,
        description="Component sizes, largest first, when pruning stopped",
    )
    trace: List[PruneStep] = Field(default_factory=list)
    reweighting_note: Optional[str] = None
    mst: Optional[MstResult] = Field(
        default=None,
        exclude=True,
        description="Tree the split was computed on, for --dump-mst",
    )

    model_config = ConfigDict(extra="ignore")

    @property
    def outlier_fraction(self) -> float:
        return len(self.outlier_ids) / self.n if self.n else 0.0
