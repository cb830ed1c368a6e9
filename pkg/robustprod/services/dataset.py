"""
Panel ingestion and preparation: load, deflate, log, project, filter.

Every function returns a new PanelDataset; inputs are never mutated.
"""

import math
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from robustprod.core.config import CSV_DELIMITER, DEFAULT_MIN_RUN
from robustprod.core.exceptions import (
    DeflatorCoverageError,
    DuplicateRecordError,
    InvalidParameterError,
    InvalidScaleError,
    PanelFormatError,
    UnknownRecordError,
    UnmappedColumnError,
)
from robustprod.enums.enums import (
    CANONICAL_MEASURES,
    DEFLATOR_ROUTING,
    DeflatorSeries,
    Measure,
    Scale,
)
from robustprod.schemas.cloud import PointCloud
from robustprod.schemas.dataset import (
    ColumnMap,
    DeflatorTable,
    PanelDataset,
    PanelRecord,
    RejectedRow,
)
from robustprod.utils.logger import logger_instance as log


Source = Union[str, Path, TextIO]

REASON_MISSING_ID = "missing identifier"
REASON_MISSING = "missing measure"
REASON_NON_POSITIVE = "non-positive measure"
REASON_NON_FINITE = "non-finite measure"


def make_record_id(farm_id: str, year: int) -> str:
    return f"{farm_id}:{int(year)}"


def _ordered_measures(measures: Optional[Iterable[Measure]]) -> List[Measure]:
    if measures is None:
        return list(CANONICAL_MEASURES)
    wanted = {Measure(m) for m in measures}
    return [m for m in CANONICAL_MEASURES if m in wanted]


def _read_table(source: Source, delimiter: str) -> pd.DataFrame:
    try:
        return pd.read_csv(source, sep=delimiter, dtype=str, keep_default_na=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise PanelFormatError(f"Unparseable tabular input: {e}") from e


def _build_frame(
    raw: pd.DataFrame, column_map: ColumnMap, measures: List[Measure]
) -> pd.DataFrame:
    """Select and rename mapped columns; numeric coercion turns garbage into NaN."""
    header = set(raw.columns)
    required = [column_map.farm_id, column_map.year]
    for measure in measures:
        if measure == Measure.materials and column_map.materials_parts:
            required.extend(column_map.materials_parts)
        else:
            required.append(column_map.column_for(measure) or f"<{measure.value}>")

    missing = [name for name in required if name not in header]
    if missing:
        raise UnmappedColumnError(
            f"Required column(s) not found in header: {', '.join(missing)}",
            details={"missing": missing, "header": sorted(header)},
        )

    frame = pd.DataFrame(index=raw.index)
    frame["farm_id"] = raw[column_map.farm_id]
    frame["year"] = pd.to_numeric(raw[column_map.year], errors="coerce")

    for measure in measures:
        if measure == Measure.materials and column_map.materials_parts:
            parts = raw[list(column_map.materials_parts)].apply(
                pd.to_numeric, errors="coerce"
            )
            # a single missing part leaves the composite missing
            frame[measure.value] = parts.sum(axis=1, min_count=parts.shape[1])
        else:
            frame[measure.value] = pd.to_numeric(
                raw[column_map.column_for(measure)], errors="coerce"
            )

    return frame


def _reject_reason(errors: list) -> str:
    if any(e["type"] == "greater_than" for e in errors):
        return REASON_NON_POSITIVE
    return REASON_MISSING_ID


def _validate_rows(
    frame: pd.DataFrame, measures: List[Measure], scale: Scale
) -> tuple:
    """
    Row-wise validation through PanelRecord.

    Returns (kept index, rejects, keys) where ``keys`` holds the
    (farm_id, year) of every row with a usable identifier, rejected or not.
    """
    kept: List[int] = []
    keys: List[tuple] = []
    rejects: List[RejectedRow] = []
    names = [m.value for m in measures]

    for position, row in enumerate(frame.itertuples(index=True)):
        values = row._asdict()
        farm_id = values["farm_id"]
        year = values["year"]
        farm_id = None if farm_id is None or pd.isna(farm_id) else str(farm_id).strip()
        year_ok = year is not None and not pd.isna(year) and float(year).is_integer()
        row_year = int(year) if year_ok else None

        if not farm_id or not year_ok:
            rejects.append(
                RejectedRow(
                    row_number=position + 1,
                    farm_id=farm_id,
                    year=row_year,
                    reason=REASON_MISSING_ID,
                )
            )
            continue

        keys.append((farm_id, row_year))
        measure_values = {name: values[name] for name in names}
        if any(v is None or pd.isna(v) for v in measure_values.values()):
            reason = REASON_MISSING
        elif not all(math.isfinite(v) for v in measure_values.values()):
            reason = REASON_NON_FINITE
        elif scale == Scale.log:
            reason = None
        else:
            try:
                PanelRecord(farm_id=farm_id, year=row_year, **measure_values)
                reason = None
            except ValidationError as e:
                reason = _reject_reason(e.errors())

        if reason is None:
            kept.append(row.Index)
        else:
            rejects.append(
                RejectedRow(
                    row_number=position + 1,
                    farm_id=farm_id,
                    year=row_year,
                    reason=reason,
                )
            )

    return kept, rejects, keys


def load_panel(
    source: Source,
    column_map: Optional[ColumnMap] = None,
    delimiter: str = CSV_DELIMITER,
    measures: Optional[Sequence[Measure]] = None,
    scale: Scale = Scale.raw,
) -> PanelDataset:
    """
    Read a delimited panel with a header row.

    Rows with a missing or non-positive measure end up in ``rejects`` with a
    reason; nothing is imputed. ``scale=log`` reads files that already hold
    logarithms (finite values instead of positive ones are required).
    """
    if scale == Scale.deflated:
        raise InvalidScaleError("Panels are loaded either raw or already in logs")

    column_map = column_map or ColumnMap()
    ordered = _ordered_measures(measures)
    raw = _read_table(source, delimiter)
    frame = _build_frame(raw, column_map, ordered)

    kept, rejects, keys = _validate_rows(frame, ordered, scale)

    identified = pd.DataFrame(keys, columns=["farm_id", "year"])
    duplicated = identified.duplicated(keep=False)
    if duplicated.any():
        pairs = identified[duplicated].drop_duplicates().itertuples(index=False)
        pairs = [f"({farm}, {year})" for farm, year in pairs]
        raise DuplicateRecordError(
            f"Duplicate (farm_id, year) key(s): {', '.join(pairs)}",
            details={"duplicates": pairs},
        )

    frame = frame.loc[kept].copy()
    frame["farm_id"] = frame["farm_id"].astype(str).str.strip()
    frame["year"] = frame["year"].astype(int)

    frame.insert(
        0,
        "record_id",
        [make_record_id(f, y) for f, y in zip(frame["farm_id"], frame["year"])],
    )
    frame = frame[["record_id", "farm_id", "year"] + [m.value for m in ordered]]
    frame = frame.reset_index(drop=True)

    if rejects:
        log.warning(
            "Rows rejected at load",
            extra={
                "rejected": len(rejects),
                "reasons": sorted({r.reason for r in rejects}),
            },
        )
    log.info(
        "Panel loaded",
        extra={
            "records": len(frame),
            "farms": int(frame["farm_id"].nunique()),
            "scale": scale.value,
        },
    )

    return PanelDataset(frame=frame, scale=scale, measures=ordered, rejects=rejects)


def load_deflators(
    source: Source, base_year: int, delimiter: str = CSV_DELIMITER
) -> DeflatorTable:
    """
    Read ``year,series,value`` rows and normalize each series to 1 at the
    base year.
    """
    raw = _read_table(source, delimiter)
    required = {"year", "series", "value"}
    if not required.issubset(raw.columns):
        raise UnmappedColumnError(
            "Deflator file needs the columns year, series, value",
            details={"header": list(raw.columns)},
        )

    values: dict = {}
    for position, row in enumerate(raw.itertuples(index=False)):
        try:
            series = DeflatorSeries(str(row.series).strip())
            year = int(row.year)
            value = float(row.value)
        except ValueError as e:
            raise PanelFormatError(
                f"Invalid deflator row {position + 1}: {e}",
                details={"row": position + 1},
            ) from e
        by_year = values.setdefault(series, {})
        if year in by_year:
            raise DuplicateRecordError(
                f"Duplicate deflator entry ({series.value}, {year})"
            )
        by_year[year] = value

    missing_base = [s.value for s, by_year in values.items() if base_year not in by_year]
    if missing_base:
        raise DeflatorCoverageError(
            f"Base year {base_year} missing in series: {', '.join(missing_base)}",
            details={"series": missing_base, "base_year": base_year},
        )

    normalized = {
        series: {year: value / by_year[base_year] for year, value in by_year.items()}
        for series, by_year in values.items()
    }
    try:
        return DeflatorTable(base_year=base_year, values=normalized)
    except ValidationError as e:
        raise PanelFormatError(f"Invalid deflator values: {e}") from e


def deflate(data: PanelDataset, deflators: DeflatorTable) -> PanelDataset:
    """
    Express monetary measures in base-year prices: output by the output
    index, capital by the investment-goods index, materials by the
    consumption-goods index. Labour and land are physical and unchanged.
    """
    if data.scale != Scale.raw:
        raise InvalidScaleError(
            f"Only raw panels can be deflated, got scale={data.scale.value}"
        )

    frame = data.frame.copy()
    years = sorted(frame["year"].unique().tolist())
    missing = []
    for measure in data.measures:
        series = DEFLATOR_ROUTING.get(measure)
        if series is None:
            continue
        index = pd.Series(deflators.values.get(series, {}), dtype=float)
        absent = [y for y in years if y not in index.index]
        if absent:
            missing.append({"series": series.value, "years": absent})
            continue
        frame[measure.value] = frame[measure.value] / frame["year"].map(index)

    if missing:
        raise DeflatorCoverageError(
            "Deflator table does not cover every panel year",
            details={"missing": missing},
        )

    log.info(
        "Panel deflated",
        extra={"records": len(frame), "base_year": deflators.base_year},
    )
    return data.model_copy(
        update={"frame": frame, "scale": Scale.deflated, "base_year": deflators.base_year}
    )


def log_transform(data: PanelDataset) -> PanelDataset:
    """Replace every measure by its natural logarithm."""
    if data.scale == Scale.log:
        raise InvalidScaleError("Panel is already in logs")

    frame = data.frame.copy()
    values = frame[data.measure_columns].to_numpy(dtype=float)
    if not (values > 0).all():
        raise InvalidScaleError("Non-positive measure encountered, log is undefined")
    frame[data.measure_columns] = np.log(values)

    return data.model_copy(update={"frame": frame, "scale": Scale.log})


def to_point_cloud(
    data: PanelDataset, dims: Optional[Sequence[Measure]] = None
) -> PointCloud:
    """One point per record, coordinates in canonical measure order."""
    if data.scale != Scale.log:
        raise InvalidScaleError(
            f"Point clouds are built from log-scale panels, got {data.scale.value}"
        )
    columns = (
        data.measure_columns
        if dims is None
        else [m.value for m in _ordered_measures(dims)]
    )
    unknown = [c for c in columns if c not in data.measure_columns]
    if unknown:
        raise InvalidParameterError(f"Dimension(s) not in panel: {', '.join(unknown)}")

    points = data.frame[columns].to_numpy(dtype=float).reshape(-1, len(columns))
    return PointCloud(points=points, ids=data.record_ids, dims=columns)


def subset(data: PanelDataset, ids: Iterable[str]) -> PanelDataset:
    """Restrict a panel to the given record ids, keeping its row order."""
    wanted = set(ids)
    unknown = wanted.difference(data.frame["record_id"])
    if unknown:
        raise UnknownRecordError(
            f"{len(unknown)} record id(s) not in dataset",
            details={"examples": sorted(unknown)[:5]},
        )
    frame = data.frame[data.frame["record_id"].isin(wanted)].reset_index(drop=True)
    return data.model_copy(update={"frame": frame})


def filter_min_consecutive(
    data: PanelDataset,
    keep_ids: Iterable[str],
    min_run: int = DEFAULT_MIN_RUN,
) -> PanelDataset:
    """
    Restrict to ``keep_ids`` and keep, within each farm, only the records
    that belong to a run of at least ``min_run`` consecutive years.
    """
    if min_run < 1:
        raise InvalidParameterError(f"min_run must be >= 1, got {min_run}")

    restricted = subset(data, keep_ids)
    frame = restricted.frame.sort_values(["farm_id", "year"], kind="mergesort")

    new_run = (frame["farm_id"] != frame["farm_id"].shift()) | (
        frame["year"].diff() != 1
    )
    run_id = new_run.cumsum()
    run_length = run_id.map(run_id.value_counts())
    frame = frame[run_length >= min_run]

    # restore the original record order
    frame = frame.sort_index().reset_index(drop=True)

    log.info(
        "Consecutive-run filter applied",
        extra={
            "min_run": min_run,
            "records_in": len(restricted.frame),
            "records_out": len(frame),
            "farms_out": int(frame["farm_id"].nunique()),
        },
    )
    return restricted.model_copy(update={"frame": frame})


def write_panel(data: PanelDataset, path: Union[str, Path], delimiter: str = CSV_DELIMITER):
    """Write canonical columns so any subcommand can read the file back."""
    data.frame.to_csv(path, sep=delimiter, index=False, float_format="%.17g")
