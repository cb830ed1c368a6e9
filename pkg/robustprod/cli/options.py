"""
Options shared by the subcommands that read a panel, and their parsing.
"""

from pathlib import Path
from typing import Annotated, List, Optional, Tuple

import typer

from robustprod.core.config import CSV_DELIMITER
from robustprod.core.exceptions import InvalidParameterError
from robustprod.enums.enums import Measure, ReportFormat, Scale
from robustprod.schemas.dataset import ColumnMap, DeflatorTable, PanelDataset
from robustprod.services.dataset import load_deflators, load_panel


InputOpt = Annotated[
    Path,
    typer.Option(
        "--input",
        "-i",
        exists=True,
        dir_okay=False,
        readable=True,
        help="Delimited panel file with a header row",
    ),
]
ColumnsOpt = Annotated[
    Optional[str],
    typer.Option(
        "--columns",
        help="Column mapping as role=name pairs, e.g. "
        "'output=SE131,labour=SE011,materials=F72+SE300+SE305+SE336'",
    ),
]
FadnOpt = Annotated[
    bool, typer.Option("--fadn", help="Start from the FADN variable codes")
]
MeasuresOpt = Annotated[
    Optional[str],
    typer.Option("--measures", help="Comma separated measures to load (default: all five)"),
]
ScaleOpt = Annotated[
    Scale, typer.Option("--scale", help="raw levels, or values already in logs")
]
DelimiterOpt = Annotated[str, typer.Option("--delimiter", help="Field delimiter")]
DeflatorsOpt = Annotated[
    Optional[Path],
    typer.Option(
        "--deflators",
        exists=True,
        dir_okay=False,
        help="year,series,value price indices (series: output, investment, consumption)",
    ),
]
BaseYearOpt = Annotated[
    Optional[int], typer.Option("--base-year", help="Year the indices are normalized to")
]
FormatOpt = Annotated[ReportFormat, typer.Option("--format", "-f", help="Report format")]
ReportOpt = Annotated[
    Optional[Path],
    typer.Option("--report", "-o", help="Report file (stdout when omitted)"),
]
AlphaOpt = Annotated[
    float, typer.Option("--alpha", min=0.0, max=1.0, help="Probability for the critical edge length")
]
DimsOpt = Annotated[
    str, typer.Option("--dims", help="'all' or a comma separated list of measures")
]

DEFAULT_DELIMITER = CSV_DELIMITER

_ROLES = {"farm_id", "year", *(m.value for m in Measure)}


def parse_measures(value: Optional[str]) -> Optional[List[Measure]]:
    if value is None or value.strip().lower() == "all":
        return None
    try:
        return [Measure(part.strip()) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def parse_column_map(columns: Optional[str], fadn: bool = False) -> ColumnMap:
    base = ColumnMap.fadn() if fadn else ColumnMap()
    if not columns:
        return base

    updates = {}
    for pair in columns.split(","):
        role, sep, name = pair.partition("=")
        role, name = role.strip(), name.strip()
        if not sep or role not in _ROLES or not name:
            raise typer.BadParameter(f"invalid column mapping '{pair}'")
        if role == Measure.materials.value and "+" in name:
            updates["materials"] = None
            updates["materials_parts"] = [part.strip() for part in name.split("+")]
        else:
            updates[role] = name
            if role == Measure.materials.value:
                updates["materials_parts"] = []
    return base.model_copy(update=updates)


def load_input(
    path: Path,
    columns: Optional[str] = None,
    fadn: bool = False,
    measures: Optional[str] = None,
    scale: Scale = Scale.raw,
    delimiter: str = DEFAULT_DELIMITER,
    deflators: Optional[Path] = None,
    base_year: Optional[int] = None,
) -> Tuple[PanelDataset, Optional[DeflatorTable]]:
    """Panel as loaded plus the deflator table when one was given."""
    data = load_panel(
        path,
        column_map=parse_column_map(columns, fadn),
        delimiter=delimiter,
        measures=parse_measures(measures),
        scale=scale,
    )
    table = None
    if deflators is not None:
        if base_year is None:
            raise InvalidParameterError("--deflators requires --base-year")
        table = load_deflators(deflators, base_year, delimiter)
    return data, table
