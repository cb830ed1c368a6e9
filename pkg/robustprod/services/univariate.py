"""
Univariate IQR trimming on a ratio of two measures, the screening step used
in the applied literature this package is compared against.
"""

import numpy as np
import pandas as pd

from robustprod.core.exceptions import InvalidParameterError, ZeroDenominatorError
from robustprod.enums.enums import Scale
from robustprod.schemas.dataset import PanelDataset
from robustprod.schemas.univariate import TrimResult, TrimRule
from robustprod.utils.logger import logger_instance as log


def ratio_in_levels(data: PanelDataset, rule: TrimRule) -> pd.Series:
    """Numerator / denominator per record, in levels even for log panels."""
    for measure in (rule.numerator, rule.denominator):
        if measure not in data.measures:
            raise InvalidParameterError(
                f"Measure '{measure.value}' not in dataset",
                details={"measures": data.measure_columns},
            )

    num = data.frame[rule.numerator.value].astype(float)
    den = data.frame[rule.denominator.value].astype(float)
    if data.scale == Scale.log:
        return np.exp(num - den)

    zero = den == 0
    if zero.any():
        raise ZeroDenominatorError(
            f"{int(zero.sum())} record(s) with zero {rule.denominator.value}",
            details={"examples": data.frame.loc[zero, "record_id"].head(5).tolist()},
        )
    return num / den


def iqr_bounds(values: np.ndarray, scale_factor: float) -> tuple:
    """(q1, q3, lower, upper) with linearly interpolated quartiles."""
    q1, q3 = np.quantile(values, [0.25, 0.75], method="linear")
    spread = q3 - q1
    return float(q1), float(q3), float(q1 - scale_factor * spread), float(q3 + scale_factor * spread)


def trim(data: PanelDataset, rule: TrimRule) -> TrimResult:
    """
    Flag records (or whole farms with ``per_farm``) whose ratio lies outside
    [Q1 - s*IQR, Q3 + s*IQR]. Bounds are inclusive.
    """
    if data.n_records == 0:
        raise InvalidParameterError("Cannot trim an empty dataset")

    ratio = ratio_in_levels(data, rule)
    frame = data.frame[["record_id", "farm_id"]].assign(ratio=ratio.to_numpy())

    if rule.per_farm:
        by_farm = frame.groupby("farm_id", sort=True)["ratio"].mean()
        q1, q3, lower, upper = iqr_bounds(by_farm.to_numpy(), rule.scale_factor)
        outside = by_farm[(by_farm < lower) | (by_farm > upper)].index
        trimmed_mask = frame["farm_id"].isin(outside)
        trimmed_farms = sorted(outside.tolist())
    else:
        q1, q3, lower, upper = iqr_bounds(frame["ratio"].to_numpy(), rule.scale_factor)
        trimmed_mask = (frame["ratio"] < lower) | (frame["ratio"] > upper)
        trimmed_farms = []

    result = TrimResult(
        kept_ids=frame.loc[~trimmed_mask, "record_id"].tolist(),
        trimmed_ids=frame.loc[trimmed_mask, "record_id"].tolist(),
        q1=q1,
        q3=q3,
        lower=lower,
        upper=upper,
        per_farm=rule.per_farm,
        trimmed_farms=trimmed_farms,
    )
    log.info(
        "IQR trim applied",
        extra={
            "ratio": f"{rule.numerator.value}/{rule.denominator.value}",
            "per_farm": rule.per_farm,
            "kept": len(result.kept_ids),
            "trimmed": len(result.trimmed_ids),
        },
    )
    return result
