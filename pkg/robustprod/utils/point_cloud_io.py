from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from robustprod.core.config import CSV_DELIMITER
from robustprod.core.exceptions import PanelFormatError, UnmappedColumnError
from robustprod.enums.enums import CANONICAL_MEASURES
from robustprod.schemas.cloud import PointCloud


ID_COLUMN = "record_id"
_KEY_COLUMNS = {ID_COLUMN, "farm_id", "year"}


def _default_dims(columns: Sequence[str]) -> List[str]:
    canonical = [m.value for m in CANONICAL_MEASURES]
    others = [c for c in columns if c not in _KEY_COLUMNS]
    known = [c for c in canonical if c in others]
    return known + [c for c in others if c not in canonical]


def read_point_cloud(
    source: Union[str, Path],
    dims: Optional[Iterable[str]] = None,
    delimiter: str = CSV_DELIMITER,
) -> PointCloud:
    """
    Cloud from a CSV holding a ``record_id`` column and one column per
    dimension. Panel files written by ``write_panel`` qualify as-is.
    """
    try:
        frame = pd.read_csv(source, sep=delimiter, dtype={ID_COLUMN: str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise PanelFormatError(f"Unparseable point cloud file: {e}") from e

    if ID_COLUMN not in frame.columns:
        raise UnmappedColumnError(
            f"Point cloud file needs a '{ID_COLUMN}' column",
            details={"header": list(frame.columns)},
        )
    dims = list(dims) if dims is not None else _default_dims(frame.columns)
    missing = [d for d in dims if d not in frame.columns]
    if missing:
        raise UnmappedColumnError(
            f"Dimension(s) not in file: {', '.join(missing)}",
            details={"missing": missing},
        )

    values = frame[dims].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    if np.isnan(values).any():
        raise PanelFormatError("Point cloud file holds non-numeric coordinates")

    return PointCloud(
        points=values.reshape(-1, len(dims)),
        ids=frame[ID_COLUMN].astype(str).tolist(),
        dims=dims,
    )
