import json
from pathlib import Path
from typing import Annotated, Optional

import typer

from robustprod.cli.options import (
    DEFAULT_DELIMITER,
    AlphaOpt,
    BaseYearOpt,
    ColumnsOpt,
    DeflatorsOpt,
    DelimiterOpt,
    DimsOpt,
    FadnOpt,
    InputOpt,
    MeasuresOpt,
    ReportOpt,
    ScaleOpt,
    load_input,
    parse_measures,
)
from robustprod.core.config import DEFAULT_ALPHA
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.enums.enums import Scale
from robustprod.schemas.decontamination import PruneConfig
from robustprod.services.dataset import subset, to_point_cloud, write_panel
from robustprod.services.pipeline import prepare
from robustprod.services.pmst import decontaminate as run_decontamination
from robustprod.services.report import emit


@cli_error_handler("decontaminate")
def decontaminate(
    input: InputOpt,
    alpha: AlphaOpt = DEFAULT_ALPHA,
    standardize: Annotated[
        bool, typer.Option("--standardize", help="z-score coordinates before the tree")
    ] = False,
    dims: DimsOpt = "all",
    report: ReportOpt = None,
    dump_mst: Annotated[
        Optional[Path], typer.Option("--dump-mst", help="Write the MST edge list as JSON")
    ] = None,
    non_outliers_out: Annotated[
        Optional[Path], typer.Option("--non-outliers-out", help="Panel of the non-outliers")
    ] = None,
    outliers_out: Annotated[
        Optional[Path], typer.Option("--outliers-out", help="Panel of the outliers")
    ] = None,
    columns: ColumnsOpt = None,
    fadn: FadnOpt = False,
    measures: MeasuresOpt = None,
    scale: ScaleOpt = Scale.raw,
    delimiter: DelimiterOpt = DEFAULT_DELIMITER,
    deflators: DeflatorsOpt = None,
    base_year: BaseYearOpt = None,
):
    """Split records into non-outliers and outliers by pruning the MST."""
    data, table = load_input(
        input, columns, fadn, measures, scale, delimiter, deflators, base_year
    )
    data = prepare(data, table)
    config = PruneConfig(alpha=alpha, standardize=standardize)

    cloud = to_point_cloud(data, parse_measures(dims))
    result = run_decontamination(cloud, config)

    if dump_mst is not None:
        tree = result.mst.to_report(cloud.ids)
        dump_mst.write_text(json.dumps(tree, indent=2) + "\n", encoding="utf-8")
    if non_outliers_out is not None:
        write_panel(subset(data, result.non_outlier_ids), non_outliers_out, delimiter)
    if outliers_out is not None:
        write_panel(subset(data, result.outlier_ids), outliers_out, delimiter)

    emit(result, path=report)
