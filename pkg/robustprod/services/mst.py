"""
Euclidean minimum spanning tree of a point cloud.

Prim's algorithm with distances evaluated on demand from the vertex that
was just attached, so memory stays O(n) beyond the input. Equal weights are
resolved in favour of the lexicographically smaller (i, j) index pair,
which keeps results reproducible on data with duplicated coordinates.
"""

import numpy as np

from robustprod.core.exceptions import NonFiniteCoordinateError
from robustprod.schemas.cloud import MstResult, PointCloud
from robustprod.utils.logger import logger_instance as log


def distances_from(points: np.ndarray, index: int) -> np.ndarray:
    """Euclidean distance from ``points[index]`` to every point."""
    diff = points - points[index]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _pair_before(a_low, a_high, b_low, b_high):
    """Elementwise lexicographic (a_low, a_high) < (b_low, b_high)."""
    return (a_low < b_low) | ((a_low == b_low) & (a_high < b_high))


def build_mst(cloud: PointCloud) -> MstResult:
    """Minimum spanning tree under Euclidean edge weights."""
    points = np.ascontiguousarray(cloud.points, dtype=float)
    n = points.shape[0]

    if not np.isfinite(points).all():
        bad = np.flatnonzero(~np.isfinite(points).all(axis=1))
        raise NonFiniteCoordinateError(
            f"{bad.size} point(s) with non-finite coordinates",
            details={"ids": [cloud.ids[i] for i in bad[:5]]},
        )

    empty = np.empty(0, dtype=np.int64)
    if n <= 1:
        return MstResult(n=n, source=empty, target=empty, weight=np.empty(0))

    indices = np.arange(n)
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best_from = np.full(n, -1, dtype=np.int64)

    source = np.empty(n - 1, dtype=np.int64)
    target = np.empty(n - 1, dtype=np.int64)
    weight = np.empty(n - 1)

    current = 0
    in_tree[current] = True
    for step in range(n - 1):
        dist = distances_from(points, current)

        # candidate edge (current, v) replaces the stored one when shorter, or
        # equally long with a smaller index pair
        cand_low = np.minimum(indices, current)
        cand_high = np.maximum(indices, current)
        best_low = np.minimum(indices, best_from)
        best_high = np.maximum(indices, best_from)
        better = (dist < best) | (
            (dist == best) & _pair_before(cand_low, cand_high, best_low, best_high)
        )
        better &= ~in_tree
        best[better] = dist[better]
        best_from[better] = current

        outside = np.flatnonzero(~in_tree)
        shortest = best[outside].min()
        tied = outside[best[outside] == shortest]
        if tied.size > 1:
            low = np.minimum(tied, best_from[tied])
            high = np.maximum(tied, best_from[tied])
            tied = tied[np.lexsort((high, low))]
        nxt = int(tied[0])

        source[step] = min(nxt, best_from[nxt])
        target[step] = max(nxt, best_from[nxt])
        weight[step] = best[nxt]

        in_tree[nxt] = True
        current = nxt

    log.debug(
        "Minimum spanning tree built",
        extra={"n": n, "p": points.shape[1], "total_weight": float(weight.sum())},
    )
    return MstResult(n=n, source=source, target=target, weight=weight)
