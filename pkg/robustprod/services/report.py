"""
Report rendering: JSON documents, plot-ready CSV, rich console tables and
formatted Excel workbooks.
"""

import json
import sys
from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd
import xlsxwriter
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from robustprod.core.exceptions import InvalidParameterError
from robustprod.enums.enums import ReportFormat
from robustprod.schemas.estimation import EstimationResult
from robustprod.schemas.montecarlo import StudySummary
from robustprod.schemas.pipeline import PipelineReport
from robustprod.utils.logger import logger_instance as log


def to_json(model: Union[BaseModel, dict]) -> str:
    """Deterministic JSON: stable key order, no timestamps."""
    if isinstance(model, BaseModel):
        return model.model_dump_json(indent=2) + "\n"
    return json.dumps(model, indent=2, default=str) + "\n"


def estimation_table(result: EstimationResult) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "parameter": result.param_names,
            "coefficient": [result.coefficients[p] for p in result.param_names],
            "std_error": [result.std_errors[p] for p in result.param_names],
            "t_stat": [result.t_stats[p] for p in result.param_names],
            "p_value": [result.p_values[p] for p in result.param_names],
        }
    )


def pipeline_table(report: PipelineReport) -> pd.DataFrame:
    """One row per scheme in the layout of the published comparison tables."""
    rows = []
    for sample in report.samples:
        rows.append(
            {
                "scheme": sample.scheme.value,
                "selected": sample.selected,
                "farms": sample.n_farms,
                **sample.estimation.table_row(),
            }
        )
    return pd.DataFrame(rows)


def study_table(summary: StudySummary) -> pd.DataFrame:
    frame = pd.DataFrame([cell.model_dump(mode="json") for cell in summary.cells])
    return frame


def render_table(frame: pd.DataFrame, title: str, console: Optional[Console] = None):
    table = Table(title=title, header_style="bold white on blue")
    for column in frame.columns:
        table.add_column(str(column), justify="right" if column != frame.columns[0] else "left")
    for row in frame.itertuples(index=False):
        table.add_row(*[_cell(value) for value in row])
    (console or Console()).print(table)


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and pd.isna(value)):
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def write_xlsx(sheets: Dict[str, pd.DataFrame], path: Union[str, Path]):
    workbook = xlsxwriter.Workbook(str(path), {"nan_inf_to_errors": True})

    header_format = workbook.add_format(
        {
            "bold": True,
            "bg_color": "#4472C4",
            "font_color": "white",
            "border": 1,
            "align": "center",
            "valign": "vcenter",
        }
    )
    cell_format = workbook.add_format({"border": 1, "align": "left", "valign": "vcenter"})
    number_format = workbook.add_format(
        {"border": 1, "align": "right", "valign": "vcenter", "num_format": "0.0000"}
    )

    for name, frame in sheets.items():
        worksheet = workbook.add_worksheet(name[:31])
        for col, header in enumerate(frame.columns):
            worksheet.write(0, col, str(header), header_format)
            worksheet.set_column(col, col, max(12, len(str(header)) + 2))
        worksheet.freeze_panes(1, 0)

        for row_idx, row in enumerate(frame.itertuples(index=False), start=1):
            for col, value in enumerate(row):
                if value is None or (isinstance(value, float) and pd.isna(value)):
                    worksheet.write_blank(row_idx, col, None, cell_format)
                elif isinstance(value, float):
                    worksheet.write_number(row_idx, col, value, number_format)
                elif pd.api.types.is_integer(value):
                    worksheet.write_number(row_idx, col, int(value), cell_format)
                else:
                    worksheet.write(row_idx, col, value, cell_format)

    workbook.close()
    log.info("Excel report written", extra={"path": str(path), "sheets": list(sheets)})


def emit(
    model: Union[BaseModel, dict],
    fmt: ReportFormat = ReportFormat.json,
    path: Optional[Union[str, Path]] = None,
    table: Optional[pd.DataFrame] = None,
    title: str = "robustprod",
    console: Optional[Console] = None,
):
    """
    Write ``model`` in the requested format. ``table`` is the flat view used
    by csv, table and xlsx; JSON always carries the whole model.
    """
    if fmt != ReportFormat.json and table is None:
        raise InvalidParameterError(f"Format '{fmt.value}' is not available for this report")

    if fmt == ReportFormat.json:
        text = to_json(model)
        if path is None:
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
    elif fmt == ReportFormat.csv:
        if path is None:
            sys.stdout.write(table.to_csv(index=False))
        else:
            table.to_csv(path, index=False)
    elif fmt == ReportFormat.table:
        render_table(table, title, console)
    else:
        if path is None:
            raise InvalidParameterError("The xlsx format needs an output path")
        write_xlsx({title: table}, path)
