from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class PointCloud(BaseModel):
    """n observations in p-dimensional space with stable record ids"""

    points: np.ndarray
    ids: List[str]
    dims: List[str]

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_shape(self):
        if self.points.ndim != 2:
            raise ValueError("points must be an n x p matrix")
        if self.points.shape[0] != len(self.ids):
            raise ValueError("one id per point is required")
        if self.points.shape[1] != len(self.dims) or len(self.dims) < 1:
            raise ValueError("p must be at least 1 and match the dimension names")
        return self

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def p(self) -> int:
        return self.points.shape[1]

    def take(self, indices) -> "PointCloud":
        indices = np.asarray(indices, dtype=int)
        return PointCloud(
            points=self.points[indices],
            ids=[self.ids[i] for i in indices],
            dims=list(self.dims),
        )


class Edge(BaseModel):
    source: int = Field(..., ge=0, description="Smaller endpoint index")
    target: int = Field(..., ge=0, description="Larger endpoint index")
    weight: float = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)


class MstResult(BaseModel):
    """
    Edges stored column-wise: ``source[e] < target[e]`` and ``weight[e]`` is
    their Euclidean distance. Edges appear in the order Prim's algorithm
    attached them.
    """

    n: int = Field(..., ge=0)
    source: np.ndarray
    target: np.ndarray
    weight: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def n_edges(self) -> int:
        return int(self.weight.shape[0])

    @property
    def total_weight(self) -> float:
        return float(self.weight.sum())

    def edges(self) -> List[Edge]:
        return [
            Edge(source=int(i), target=int(j), weight=float(w))
            for i, j, w in zip(self.source, self.target, self.weight)
        ]

    def to_report(self, ids: List[str]) -> dict:
        """Edge list keyed by record ids, for ``--dump-mst``."""
        return {
            "n": self.n,
            "total_weight": self.total_weight,
            "edges": [
                {"source": ids[e.source], "target": ids[e.target], "weight": e.weight}
                for e in self.edges()
            ],
        }
