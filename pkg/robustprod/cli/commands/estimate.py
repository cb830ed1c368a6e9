from typing import Annotated, Optional

import typer

from robustprod.cli.options import (
    DEFAULT_DELIMITER,
    BaseYearOpt,
    ColumnsOpt,
    DeflatorsOpt,
    DelimiterOpt,
    FadnOpt,
    FormatOpt,
    InputOpt,
    MeasuresOpt,
    ReportOpt,
    ScaleOpt,
    load_input,
    parse_measures,
)
from robustprod.core.config import DEFAULT_CF_DEGREE
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.enums.enums import INPUT_MEASURES, Estimator, Measure, ReportFormat, Scale
from robustprod.schemas.estimation import ModelSpec
from robustprod.services.dataset import filter_min_consecutive
from robustprod.services.estimate import fit
from robustprod.services.pipeline import prepare
from robustprod.services.report import emit, estimation_table


RegressorsOpt = Annotated[
    Optional[str],
    typer.Option("--regressors", help="Comma separated inputs (default: every input in the panel)"),
]
EstimatorOpt = Annotated[Estimator, typer.Option("--estimator", help="within or wlp")]
DegreeOpt = Annotated[
    int, typer.Option("--degree", min=1, help="Control-function polynomial degree")
]
YearDummiesOpt = Annotated[bool, typer.Option("--year-dummies/--no-year-dummies")]
ClusterOpt = Annotated[str, typer.Option("--cluster", help="Cluster key (farm only)")]
LagDepthOpt = Annotated[int, typer.Option("--lag-depth", min=1, help="Deepest lag used as instrument")]


def build_spec(
    available,
    regressors: Optional[str],
    estimator: Estimator,
    degree: int,
    year_dummies: bool,
    cluster: str,
    proxy: Measure,
    state: Measure,
    lag_depth: int,
) -> ModelSpec:
    if cluster not in ("farm", "farm_id"):
        raise typer.BadParameter("only farm clustering is supported", param_hint="--cluster")
    chosen = parse_measures(regressors)
    if chosen is None:
        chosen = [m for m in INPUT_MEASURES if m in available]
    return ModelSpec(
        regressors=chosen,
        estimator=estimator,
        degree=degree,
        year_dummies=year_dummies,
        proxy=proxy,
        state=state,
        lag_depth=lag_depth,
    )


@cli_error_handler("estimate")
def estimate(
    input: InputOpt,
    estimator: EstimatorOpt = Estimator.wlp,
    regressors: RegressorsOpt = None,
    degree: DegreeOpt = DEFAULT_CF_DEGREE,
    year_dummies: YearDummiesOpt = True,
    cluster: ClusterOpt = "farm",
    proxy: Annotated[Measure, typer.Option("--proxy")] = Measure.materials,
    state: Annotated[Measure, typer.Option("--state")] = Measure.capital,
    lag_depth: LagDepthOpt = 1,
    min_run: Annotated[
        int, typer.Option("--min-run", min=1, help="Keep runs of at least this many consecutive years")
    ] = 1,
    fmt: FormatOpt = ReportFormat.json,
    report: ReportOpt = None,
    columns: ColumnsOpt = None,
    fadn: FadnOpt = False,
    measures: MeasuresOpt = None,
    scale: ScaleOpt = Scale.raw,
    delimiter: DelimiterOpt = DEFAULT_DELIMITER,
    deflators: DeflatorsOpt = None,
    base_year: BaseYearOpt = None,
):
    """Estimate the Cobb-Douglas production function on a panel."""
    data, table = load_input(
        input, columns, fadn, measures, scale, delimiter, deflators, base_year
    )
    data = prepare(data, table)
    spec = build_spec(
        data.measures, regressors, estimator, degree, year_dummies, cluster, proxy, state, lag_depth
    )
    if min_run > 1:
        data = filter_min_consecutive(data, data.record_ids, min_run)

    result = fit(data, spec)
    emit(result, fmt, report, table=estimation_table(result), title="estimate")
