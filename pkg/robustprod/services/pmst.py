"""
Decontamination by pruning the minimum spanning tree.

1. build the MST of the cloud;
2. delete edges longest first until the next deletion would leave every
   component smaller than floor((n + p + 1) / 2); the largest component is
   the robust core G' with edge set E';
3. derive the critical edge length from the E' edge lengths with the
   finite-sample Chebyshev bound;
4. reattach every MST edge no longer than the critical length; points
   connected to the core are the non-outliers.
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from robustprod.core.exceptions import (
    BreakdownViolationError,
    InsufficientObservationsError,
    ReweightingUndefinedError,
)
from robustprod.schemas.cloud import MstResult, PointCloud
from robustprod.schemas.decontamination import (
    CorePruning,
    DecontaminationResult,
    PruneConfig,
    PruneStep,
)
from robustprod.services.mst import build_mst
from robustprod.utils.logger import logger_instance as log


# m * (1 - alpha) must exceed 1 by more than rounding noise
_BOUNDARY_TOL = 1e-12


def breakdown_bound(n: int, p: int) -> int:
    return (n + p + 1) // 2


def deletion_order(mst: MstResult) -> np.ndarray:
    """Edge positions longest first; ties by smaller (i, j) pair first."""
    return np.lexsort((mst.target, mst.source, -mst.weight))


def _components(n: int, mst: MstResult, edge_positions: Sequence[int]) -> np.ndarray:
    positions = np.asarray(edge_positions, dtype=np.int64)
    graph = coo_matrix(
        (
            np.ones(positions.size),
            (mst.source[positions], mst.target[positions]),
        ),
        shape=(n, n),
    )
    _, labels = connected_components(graph, directed=False)
    return labels


def _pick_largest(
    labels: np.ndarray, mst: MstResult, edge_positions: np.ndarray
) -> int:
    """
    Label of the largest component. Equal sizes go to the smaller total
    internal edge weight, then to the component holding the smallest index.
    """
    sizes = np.bincount(labels)
    internal = np.zeros(sizes.size)
    np.add.at(internal, labels[mst.source[edge_positions]], mst.weight[edge_positions])
    first_member = np.full(sizes.size, labels.size)
    np.minimum.at(first_member, labels, np.arange(labels.size))

    candidates = np.flatnonzero(sizes == sizes.max())
    ranked = sorted(candidates, key=lambda c: (internal[c], first_member[c]))
    return int(ranked[0])


def prune_to_core(mst: MstResult, n: int, p: int) -> CorePruning:
    """
    Delete MST edges in non-increasing weight order, stopping right before
    the first deletion that would leave all components below the breakdown
    bound.

    The largest-component size after every prefix of deletions is obtained
    by adding the edges back in reverse order with a disjoint set.
    """
    bound = breakdown_bound(n, p)
    order = deletion_order(mst)
    n_edges = order.size

    # largest[r]: size of the largest component when edges order[r:] remain
    largest = np.ones(n_edges + 1, dtype=np.int64)
    components = DisjointSet(range(n))
    current = 1
    for r in range(n_edges - 1, -1, -1):
        e = order[r]
        i, j = int(mst.source[e]), int(mst.target[e])
        components.merge(i, j)
        current = max(current, components.subset_size(i))
        largest[r] = current

    deleted = 0
    while deleted < n_edges and largest[deleted + 1] >= bound:
        deleted += 1

    remaining = order[deleted:]
    labels = _components(n, mst, remaining)
    core_label = _pick_largest(labels, mst, remaining)
    core = np.flatnonzero(labels == core_label)
    core_edges = remaining[labels[mst.source[remaining]] == core_label]

    sizes = np.sort(np.bincount(labels))[::-1]
    return CorePruning(
        core=core.tolist(),
        core_edges=sorted(core_edges.tolist()),
        deleted_edges=order[:deleted].tolist(),
        largest_after_deletion=largest[1 : deleted + 1].tolist(),
        component_sizes=sizes.tolist(),
        breakdown_bound=bound,
    )


def critical_length(edge_mean: float, edge_std: float, m: int, alpha: float) -> float:
    """
    w_crit = mean + sqrt((m^2 - 1) / (m^2 (1 - alpha) - m)) * std

    Defined only when m > 1 / (1 - alpha).
    """
    if m < 2 or m * (1.0 - alpha) - 1.0 <= _BOUNDARY_TOL:
        raise ReweightingUndefinedError(
            "reweighting undefined for this subsample size / alpha",
            details={"m": m, "alpha": alpha, "min_m": 1.0 / (1.0 - alpha)},
        )
    factor = math.sqrt((m * m - 1.0) / (m * m * (1.0 - alpha) - m))
    return edge_mean + factor * edge_std


def reweight(
    mst: MstResult,
    core: Sequence[int],
    core_edges: Sequence[int],
    w_crit: Optional[float],
) -> List[int]:
    """
    Rebuild the core with every MST edge of weight <= w_crit. E' is always
    kept. Returns the indices of the points connected to the core.
    """
    core = np.asarray(core, dtype=np.int64)
    if w_crit is None:
        return sorted(core.tolist())

    keep = mst.weight <= w_crit
    keep[np.asarray(core_edges, dtype=np.int64)] = True
    labels = _components(mst.n, mst, np.flatnonzero(keep))
    attached = np.isin(labels, np.unique(labels[core]))
    return np.flatnonzero(attached).tolist()


def working_cloud(cloud: PointCloud, config: PruneConfig) -> PointCloud:
    """The cloud the tree is built on: z-scored coordinates with ``standardize``."""
    if not config.standardize or cloud.n < 2:
        return cloud
    center = cloud.points.mean(axis=0)
    spread = cloud.points.std(axis=0, ddof=1)
    spread[spread == 0] = 1.0
    return PointCloud(points=(cloud.points - center) / spread, ids=cloud.ids, dims=cloud.dims)


def decontaminate(
    cloud: PointCloud, config: Optional[PruneConfig] = None
) -> DecontaminationResult:
    """Split a cloud into non-outliers (G'') and outliers."""
    config = config or PruneConfig()
    n, p = cloud.n, cloud.p
    if n < p + 2:
        raise InsufficientObservationsError(
            f"Decontamination needs n >= p + 2 points, got n={n}, p={p}",
            details={"n": n, "p": p},
        )

    mst = build_mst(working_cloud(cloud, config))
    pruning = prune_to_core(mst, n, p)

    if len(pruning.core) < pruning.breakdown_bound:
        raise BreakdownViolationError(
            "Core smaller than the breakdown bound",
            details={"core": len(pruning.core), "bound": pruning.breakdown_bound},
        )

    core_weights = mst.weight[pruning.core_edges]
    m = int(core_weights.size)
    edge_mean = float(core_weights.mean()) if m else None
    edge_std = float(core_weights.std(ddof=1)) if m >= 2 else None

    w_crit = None
    note = None
    try:
        w_crit = critical_length(edge_mean or 0.0, edge_std or 0.0, m, config.alpha)
    except ReweightingUndefinedError as e:
        note = f"{e.message} (m={m}, alpha={config.alpha}); non-outliers = core"
        log.warning(
            "Reweighting skipped",
            extra={"m": m, "alpha": config.alpha, "n": n},
        )

    kept = reweight(mst, pruning.core, pruning.core_edges, w_crit)
    kept_mask = np.zeros(n, dtype=bool)
    kept_mask[kept] = True

    trace = [
        PruneStep(
            source=cloud.ids[int(mst.source[e])],
            target=cloud.ids[int(mst.target[e])],
            weight=float(mst.weight[e]),
            largest_component=int(size),
        )
        for e, size in zip(pruning.deleted_edges, pruning.largest_after_deletion)
    ]

    result = DecontaminationResult(
        n=n,
        p=p,
        alpha=config.alpha,
        breakdown_bound=pruning.breakdown_bound,
        core_ids=[cloud.ids[i] for i in pruning.core],
        non_outlier_ids=[cloud.ids[i] for i in np.flatnonzero(kept_mask)],
        outlier_ids=[cloud.ids[i] for i in np.flatnonzero(~kept_mask)],
        w_crit=w_crit,
        edge_mean=edge_mean,
        edge_std=edge_std,
        m=m,
        component_sizes=pruning.component_sizes,
        trace=trace,
        reweighting_note=note,
        mst=mst,
    )

    log.info(
        "Decontamination finished",
        extra={
            "n": n,
            "p": p,
            "core": len(result.core_ids),
            "non_outliers": len(result.non_outlier_ids),
            "outliers": len(result.outlier_ids),
            "w_crit": w_crit,
        },
    )
    return result
