from typing import Annotated, Optional

import typer

from robustprod.cli.options import AlphaOpt, FormatOpt, ReportOpt
from robustprod.core.config import DEFAULT_ALPHA
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.enums.enums import ReportFormat, SimVariant
from robustprod.schemas.montecarlo import StudyConfig
from robustprod.services.montecarlo import simulation_study
from robustprod.services.report import emit, study_table
from robustprod.services.simgen import fresh_seed


@cli_error_handler("replicate")
def replicate(
    replications: Annotated[int, typer.Option("--replications", "-n", min=1)] = 200,
    seed: Annotated[
        Optional[int], typer.Option("--seed", min=0, help="Master seed, drawn and printed when omitted")
    ] = None,
    variants: Annotated[
        Optional[str], typer.Option("--variants", help="Comma separated: raw,sample1,sample2")
    ] = None,
    workers: Annotated[int, typer.Option("--workers", min=1, help="Worker processes")] = 1,
    alpha: AlphaOpt = DEFAULT_ALPHA,
    fmt: FormatOpt = ReportFormat.json,
    report: ReportOpt = None,
):
    """Monte-Carlo study of the simulated decontamination comparison."""
    if seed is None:
        seed = fresh_seed()
        typer.echo(f"seed={seed}", err=True)

    overrides = {"replications": replications, "master_seed": seed, "workers": workers, "alpha": alpha}
    if variants:
        try:
            overrides["variants"] = [SimVariant(v.strip()) for v in variants.split(",")]
        except ValueError as e:
            raise typer.BadParameter(str(e), param_hint="--variants") from e

    summary = simulation_study(StudyConfig(**overrides))
    emit(summary, fmt, report, table=study_table(summary), title="replicate")
