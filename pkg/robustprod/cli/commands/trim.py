from pathlib import Path
from typing import Annotated, Optional

import typer

from robustprod.cli.options import (
    DEFAULT_DELIMITER,
    BaseYearOpt,
    ColumnsOpt,
    DeflatorsOpt,
    DelimiterOpt,
    FadnOpt,
    InputOpt,
    MeasuresOpt,
    ReportOpt,
    ScaleOpt,
    load_input,
)
from robustprod.core.config import DEFAULT_IQR_SCALE
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.enums.enums import Scale
from robustprod.schemas.univariate import TrimRule
from robustprod.services.dataset import deflate, subset, write_panel
from robustprod.services.report import emit
from robustprod.services.univariate import trim as run_trim


@cli_error_handler("trim")
def trim(
    input: InputOpt,
    ratio: Annotated[
        str, typer.Option("--ratio", help="numerator/denominator measures")
    ] = "output/capital",
    per_farm: Annotated[
        bool,
        typer.Option("--per-farm/--per-record", help="Trim whole farms on their mean ratio"),
    ] = True,
    s: Annotated[float, typer.Option("--s", help="IQR scale factor")] = DEFAULT_IQR_SCALE,
    kept_out: Annotated[
        Optional[Path], typer.Option("--kept-out", help="Panel of the kept records")
    ] = None,
    report: ReportOpt = None,
    columns: ColumnsOpt = None,
    fadn: FadnOpt = False,
    measures: MeasuresOpt = None,
    scale: ScaleOpt = Scale.raw,
    delimiter: DelimiterOpt = DEFAULT_DELIMITER,
    deflators: DeflatorsOpt = None,
    base_year: BaseYearOpt = None,
):
    """Univariate IQR trimming on a ratio of two measures."""
    data, table = load_input(
        input, columns, fadn, measures, scale, delimiter, deflators, base_year
    )
    if table is not None:
        data = deflate(data, table)

    try:
        rule = TrimRule.parse_ratio(ratio, scale_factor=s, per_farm=per_farm)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--ratio") from e
    result = run_trim(data, rule)

    if kept_out is not None:
        write_panel(subset(data, result.kept_ids), kept_out, delimiter)
    emit(result, path=report)
