"""
Large / small company split of multivariate outliers.

The non-outliers define an upper frontier (maximal points) and a lower
frontier (minimal points) under the componentwise order. An outlier that
weakly dominates some upper-frontier point lies beyond the free-disposal
region of the frontier and is "large"; one weakly dominated by some
lower-frontier point is "small"; every other outlier is "neither".

Weak dominance: a >= b in every coordinate and a > b in at least one.
"""

import numpy as np

from robustprod.core.config import CLASSIFY_CHUNK_SIZE
from robustprod.core.exceptions import DimensionMismatchError, EmptyInputError
from robustprod.enums.enums import OutlierLabel
from robustprod.schemas.classification import DominanceBoundary, OutlierClassification
from robustprod.schemas.cloud import PointCloud
from robustprod.utils.logger import logger_instance as log


def dominates_some(
    points: np.ndarray, targets: np.ndarray, chunk_size: int = CLASSIFY_CHUNK_SIZE
) -> np.ndarray:
    """``out[i]`` is True when ``points[i]`` weakly dominates any row of ``targets``."""
    out = np.zeros(points.shape[0], dtype=bool)
    if targets.shape[0] == 0:
        return out
    for start in range(0, points.shape[0], chunk_size):
        block = points[start : start + chunk_size, None, :]
        ge = (block >= targets[None, :, :]).all(axis=2)
        gt = (block > targets[None, :, :]).any(axis=2)
        out[start : start + chunk_size] = (ge & gt).any(axis=1)
    return out


def build_boundaries(non_outliers: PointCloud) -> DominanceBoundary:
    if non_outliers.n == 0:
        raise EmptyInputError("Dominance boundaries need at least one non-outlier")

    points = non_outliers.points
    # x is dominated by s  <=>  -x weakly dominates -s
    maximal = ~dominates_some(-points, -points)
    minimal = ~dominates_some(points, points)

    ids = np.asarray(non_outliers.ids, dtype=object)
    boundary = DominanceBoundary(
        upper=points[maximal],
        lower=points[minimal],
        upper_ids=ids[maximal].tolist(),
        lower_ids=ids[minimal].tolist(),
        dims=list(non_outliers.dims),
    )
    log.debug(
        "Dominance boundaries built",
        extra={
            "non_outliers": non_outliers.n,
            "upper": int(maximal.sum()),
            "lower": int(minimal.sum()),
        },
    )
    return boundary


def classify_outliers(
    outliers: PointCloud, boundary: DominanceBoundary
) -> OutlierClassification:
    if list(outliers.dims) != list(boundary.dims):
        raise DimensionMismatchError(
            "Outliers and boundary use different dimensions",
            details={"outliers": list(outliers.dims), "boundary": list(boundary.dims)},
        )

    large = dominates_some(outliers.points, boundary.upper)
    small = dominates_some(-outliers.points, -boundary.lower)

    labels = {}
    for record_id, is_large, is_small in zip(outliers.ids, large, small):
        if is_large:
            labels[record_id] = OutlierLabel.large
        elif is_small:
            labels[record_id] = OutlierLabel.small
        else:
            labels[record_id] = OutlierLabel.neither

    result = OutlierClassification(
        labels=labels,
        small=int(small.sum()),
        large=int(large.sum()),
        neither=int((~small & ~large).sum()),
    )
    log.info("Outliers classified", extra=result.counts())
    return result
