import math

import numpy as np
import pandas as pd
import pytest

from robustprod.core.exceptions import (
    DeflatorCoverageError,
    DuplicateRecordError,
    InvalidParameterError,
    InvalidScaleError,
    PanelFormatError,
    UnknownRecordError,
    UnmappedColumnError,
)
from robustprod.enums.enums import DeflatorSeries, Measure, Scale
from robustprod.schemas.dataset import ColumnMap
from robustprod.services.dataset import (
    deflate,
    filter_min_consecutive,
    load_deflators,
    load_panel,
    log_transform,
    subset,
    to_point_cloud,
    write_panel,
)


HEADER = "farm_id,year,output,labour,land,materials,capital\n"

DEFLATORS = (
    "year,series,value\n"
    "2005,output,1.0\n2006,output,1.1\n"
    "2005,investment,1.0\n2006,investment,1.25\n"
    "2005,consumption,1.0\n2006,consumption,2.0\n"
)


def test_load_three_rows(csv_text):
    data = load_panel(
        csv_text(HEADER + "1,2005,10,5,3,4,6\n1,2006,11,5,3,4,6\n2,2005,9,4,2,3,5\n")
    )

    assert data.n_records == 3
    assert data.rejects == []
    assert data.scale == Scale.raw
    assert data.record_ids == ["1:2005", "1:2006", "2:2005"]
    assert data.measure_columns == ["output", "labour", "land", "materials", "capital"]


def test_zero_labour_is_rejected_with_reason(csv_text):
    data = load_panel(csv_text(HEADER + "1,2005,10,0,3,4,6\n1,2006,11,5,3,4,6\n"))

    assert data.n_records == 1
    assert len(data.rejects) == 1
    reject = data.rejects[0]
    assert reject.reason == "non-positive measure"
    assert (reject.farm_id, reject.year, reject.row_number) == ("1", 2005, 1)


def test_missing_measure_is_rejected(csv_text):
    data = load_panel(csv_text(HEADER + "1,2005,10,,3,4,6\n"))

    assert data.n_records == 0
    assert data.rejects[0].reason == "missing measure"


def test_duplicate_key_names_the_record(csv_text):
    with pytest.raises(DuplicateRecordError) as exc:
        load_panel(csv_text(HEADER + "7,2003,10,5,3,4,6\n7,2003,12,5,3,4,6\n"))

    assert "(7, 2003)" in exc.value.message


def test_duplicate_key_counts_rejected_rows(csv_text):
    with pytest.raises(DuplicateRecordError) as exc:
        load_panel(csv_text(HEADER + "7,2003,1,1,1,1,1\n7,2003,1,0,1,1,1\n"))

    assert exc.value.details["duplicates"] == ["(7, 2003)"]


def test_rows_without_identifier_are_not_duplicates(csv_text):
    data = load_panel(csv_text(HEADER + ",2003,1,1,1,1,1\n,2003,1,1,1,1,1\n7,2003,1,1,1,1,1\n"))

    assert data.record_ids == ["7:2003"]
    assert [r.reason for r in data.rejects] == ["missing identifier"] * 2


def test_unmapped_column(csv_text):
    with pytest.raises(UnmappedColumnError) as exc:
        load_panel(csv_text("farm_id,year,output\n1,2005,3\n"))

    assert "labour" in exc.value.message


def test_empty_stream_is_unparseable(csv_text):
    with pytest.raises(PanelFormatError):
        load_panel(csv_text(""))


def test_materials_parts_are_summed(csv_text):
    columns = ColumnMap.fadn()
    text = (
        "ID,YEAR,SE131,SE011,SE025,F72,SE300,SE305,SE336,SE360\n"
        "a,2005,100,50,20,1,2,3,4,60\n"
    )

    data = load_panel(csv_text(text), column_map=columns)

    assert data.frame.loc[0, "materials"] == 10
    assert data.frame.loc[0, "output"] == 100


def test_measure_subset_in_canonical_order(csv_text):
    data = load_panel(
        csv_text("farm_id,year,capital,output\n1,2005,2,3\n"),
        measures=[Measure.capital, Measure.output],
    )

    assert data.measure_columns == ["output", "capital"]


def test_log_scale_files_accept_negative_values(csv_text):
    data = load_panel(
        csv_text("farm_id,year,output,labour\n1,2005,-1.5,0.25\n"),
        measures=[Measure.output, Measure.labour],
        scale=Scale.log,
    )

    assert data.scale == Scale.log
    assert data.frame.loc[0, "output"] == -1.5


def test_deflate_routes_series(csv_text):
    data = load_panel(csv_text(HEADER + "1,2005,100,5,3,4,6\n1,2006,110,5,3,8,50\n"))
    table = load_deflators(csv_text(DEFLATORS), base_year=2005)

    deflated = deflate(data, table)

    frame = deflated.frame.set_index("record_id")
    assert frame.loc["1:2005", "output"] == pytest.approx(100)
    assert frame.loc["1:2006", "output"] == pytest.approx(100)
    assert frame.loc["1:2006", "capital"] == pytest.approx(40)
    assert frame.loc["1:2006", "materials"] == pytest.approx(4)
    assert frame.loc["1:2006", "labour"] == 5
    assert frame.loc["1:2006", "land"] == 3
    assert deflated.scale == Scale.deflated
    assert deflated.base_year == 2005


def test_deflators_are_normalized_to_base_year(csv_text):
    table = load_deflators(
        csv_text("year,series,value\n2005,output,80\n2006,output,88\n"), base_year=2005
    )

    assert table.index(DeflatorSeries.output, 2005) == 1.0
    assert table.index(DeflatorSeries.output, 2006) == pytest.approx(1.1)
    assert table.index(DeflatorSeries.investment, 2005) is None


def test_deflate_requires_every_year(csv_text):
    data = load_panel(csv_text(HEADER + "1,2007,100,5,3,4,6\n"))
    table = load_deflators(csv_text(DEFLATORS), base_year=2005)

    with pytest.raises(DeflatorCoverageError):
        deflate(data, table)


def test_deflate_only_raw_panels(csv_text):
    data = load_panel(csv_text(HEADER + "1,2005,100,5,3,4,6\n"))
    table = load_deflators(csv_text(DEFLATORS), base_year=2005)

    with pytest.raises(InvalidScaleError):
        deflate(deflate(data, table), table)


def test_log_transform_values(panel_factory):
    data = panel_factory(
        [{"farm_id": "a", "year": 2001, "output": 1.0, "labour": math.e, "capital": math.e**2}],
        scale=Scale.raw,
    )

    logged = log_transform(data)

    row = logged.frame.iloc[0]
    assert row["output"] == 0.0
    assert row["labour"] == pytest.approx(1.0)
    assert row["capital"] == pytest.approx(2.0)
    assert logged.scale == Scale.log


def test_rescaling_a_measure_shifts_the_coordinate(panel_factory, rng):
    rows = [
        {"farm_id": f"f{i}", "year": 2001, "output": v1, "labour": v2, "capital": v3}
        for i, (v1, v2, v3) in enumerate(rng.uniform(1, 100, (10, 3)))
    ]
    data = panel_factory(rows, scale=Scale.raw)
    scaled_frame = data.frame.copy()
    scaled_frame["labour"] *= 7.5
    scaled = data.model_copy(update={"frame": scaled_frame})

    base = to_point_cloud(log_transform(data))
    moved = to_point_cloud(log_transform(scaled))

    shift = moved.points - base.points
    np.testing.assert_allclose(shift[:, 1], math.log(7.5), atol=1e-12)
    np.testing.assert_array_equal(shift[:, [0, 2]], 0.0)


def test_point_cloud_shape_and_ids(panel_factory, rng):
    rows = [
        {"farm_id": "f", "year": 2000 + i, **dict(zip(["output", "labour", "land", "materials", "capital"], v))}
        for i, v in enumerate(rng.normal(size=(10, 5)))
    ]
    cloud = to_point_cloud(panel_factory(rows))

    assert (cloud.n, cloud.p) == (10, 5)
    assert cloud.dims == ["output", "labour", "land", "materials", "capital"]
    assert cloud.ids[3] == "f:2003"


def test_empty_dataset_gives_empty_cloud(panel_factory):
    data = panel_factory(
        [{"farm_id": "f", "year": 2000, "output": 0.0, "labour": 0.0, "land": 0.0, "materials": 0.0, "capital": 0.0}]
    )
    empty = data.model_copy(update={"frame": data.frame.iloc[0:0]})

    cloud = to_point_cloud(empty)

    assert (cloud.n, cloud.p) == (0, 5)


def test_point_at_origin(panel_factory):
    data = panel_factory(
        [{"farm_id": "f", "year": 2000, "output": 0.0, "labour": 0.0, "land": 0.0, "materials": 0.0, "capital": 0.0}]
    )

    np.testing.assert_array_equal(to_point_cloud(data).points, np.zeros((1, 5)))


def test_point_cloud_needs_log_scale(panel_factory):
    data = panel_factory([{"farm_id": "f", "year": 2000, "output": 1.0}], scale=Scale.raw)

    with pytest.raises(InvalidScaleError):
        to_point_cloud(data)


def _years_panel(panel_factory, farm_years):
    rows = [
        {"farm_id": farm, "year": year, "output": 0.0}
        for farm, years in farm_years.items()
        for year in years
    ]
    return panel_factory(rows)


def test_filter_keeps_full_run(panel_factory):
    data = _years_panel(panel_factory, {"a": range(2001, 2009)})

    kept = filter_min_consecutive(data, data.record_ids, 4)

    assert kept.n_records == 8


def test_filter_drops_farm_without_long_run(panel_factory):
    data = _years_panel(panel_factory, {"a": [2001, 2002, 2003, 2005], "b": range(2001, 2005)})

    kept = filter_min_consecutive(data, data.record_ids, 4)

    assert set(kept.frame["farm_id"]) == {"b"}


def test_filter_keeps_only_qualifying_runs(panel_factory):
    data = _years_panel(panel_factory, {"a": [2001, 2002, 2003, 2004, 2006, 2007, 2008]})

    kept = filter_min_consecutive(data, data.record_ids, 4)

    assert kept.frame["year"].tolist() == [2001, 2002, 2003, 2004]


def test_filter_applies_keep_ids_first(panel_factory):
    data = _years_panel(panel_factory, {"a": range(2001, 2009)})
    keep = [i for i in data.record_ids if i != "a:2005"]

    kept = filter_min_consecutive(data, keep, 4)

    assert kept.frame["year"].tolist() == [2001, 2002, 2003, 2004]


def test_filter_output_has_no_short_runs(panel_factory, rng):
    farm_years = {
        f"f{i}": sorted(rng.choice(np.arange(2000, 2015), size=9, replace=False).tolist())
        for i in range(20)
    }
    data = _years_panel(panel_factory, farm_years)

    kept = filter_min_consecutive(data, data.record_ids, 3)

    frame = kept.frame.sort_values(["farm_id", "year"])
    new_run = (frame["farm_id"] != frame["farm_id"].shift()) | (frame["year"].diff() != 1)
    assert (new_run.cumsum().value_counts() >= 3).all()


def test_filter_rejects_bad_min_run(panel_factory):
    data = _years_panel(panel_factory, {"a": [2001]})

    with pytest.raises(InvalidParameterError):
        filter_min_consecutive(data, data.record_ids, 0)


def test_subset_unknown_id(panel_factory):
    data = _years_panel(panel_factory, {"a": [2001]})

    with pytest.raises(UnknownRecordError):
        subset(data, ["zz:1999"])


def test_written_panel_reads_back(panel_factory, tmp_path):
    data = _years_panel(panel_factory, {"a": [2001, 2002], "b": [2001]})
    path = tmp_path / "panel.csv"

    write_panel(data, path)
    again = load_panel(path, measures=[Measure.output], scale=Scale.log)

    assert again.record_ids == data.record_ids
    pd.testing.assert_series_equal(again.frame["output"], data.frame["output"])
