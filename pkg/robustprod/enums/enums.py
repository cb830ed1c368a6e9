from enum import Enum


class Measure(str, Enum):
    output = "output"
    labour = "labour"
    land = "land"
    materials = "materials"
    capital = "capital"


# Fixed dimension order of the point cloud
CANONICAL_MEASURES = (
    Measure.output,
    Measure.labour,
    Measure.land,
    Measure.materials,
    Measure.capital,
)

INPUT_MEASURES = (
    Measure.land,
    Measure.labour,
    Measure.capital,
    Measure.materials,
)


class Scale(str, Enum):
    raw = "raw"
    deflated = "deflated"
    log = "log"


class DeflatorSeries(str, Enum):
    output = "output"
    investment = "investment"
    consumption = "consumption"


# Which price index deflates which monetary measure. Labour and land are
# physical units and are never deflated.
DEFLATOR_ROUTING = {
    Measure.output: DeflatorSeries.output,
    Measure.capital: DeflatorSeries.investment,
    Measure.materials: DeflatorSeries.consumption,
}


class RebuildMode(str, Enum):
    mst = "mst"


class OutlierLabel(str, Enum):
    small = "small"
    large = "large"
    neither = "neither"


class Estimator(str, Enum):
    within = "within"
    wlp = "wlp"


class SimVariant(str, Enum):
    raw = "raw"
    sample1 = "sample1"
    sample2 = "sample2"


class DecontaminationScheme(str, Enum):
    no_out = "no-out"
    uni_out = "uni-out"
    full_out = "full-out"
    small_large = "small-large"


class ReportFormat(str, Enum):
    json = "json"
    csv = "csv"
    table = "table"
    xlsx = "xlsx"
