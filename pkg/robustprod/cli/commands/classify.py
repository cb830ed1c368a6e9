from pathlib import Path
from typing import Annotated

import typer

from robustprod.cli.options import DEFAULT_DELIMITER, DelimiterOpt, DimsOpt, ReportOpt
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.services.classify import build_boundaries, classify_outliers
from robustprod.services.report import emit
from robustprod.utils.point_cloud_io import read_point_cloud


ExistingFile = dict(exists=True, dir_okay=False, readable=True)


@cli_error_handler("classify")
def classify(
    non_outliers: Annotated[
        Path, typer.Option("--non-outliers", help="Non-outlier records", **ExistingFile)
    ],
    outliers: Annotated[
        Path, typer.Option("--outliers", help="Outlier records to label", **ExistingFile)
    ],
    dims: DimsOpt = "all",
    report: ReportOpt = None,
    delimiter: DelimiterOpt = DEFAULT_DELIMITER,
):
    """Label outliers as large, small or neither against the dominance boundaries."""
    selected = None if dims.strip().lower() == "all" else [d.strip() for d in dims.split(",")]
    inside = read_point_cloud(non_outliers, selected, delimiter)
    outside = read_point_cloud(outliers, selected, delimiter)

    result = classify_outliers(outside, build_boundaries(inside))
    emit(result, path=report)
