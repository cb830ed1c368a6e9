import logging
from typing import Annotated

import typer

from robustprod import __version__
from robustprod.cli.commands import (
    classify,
    decontaminate,
    estimate,
    pipeline,
    replicate,
    simulate,
    trim,
)
from robustprod.utils.logger import AppLogger


app = typer.Typer(
    name="robustprod",
    help="Robust production-function analysis with MST-based outlier decontamination.",
    no_args_is_help=True,
    add_completion=False,
)


def _version(value: bool):
    if value:
        typer.echo(__version__)
        raise typer.Exit()


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")] = False,
    quiet: Annotated[bool, typer.Option("--quiet", "-q", help="Warnings and errors only")] = False,
    version: Annotated[
        bool, typer.Option("--version", callback=_version, is_eager=True)
    ] = False,
):
    if verbose:
        AppLogger().set_level(logging.DEBUG)
    elif quiet:
        AppLogger().set_level(logging.WARNING)


app.command("simulate")(simulate.simulate)
app.command("decontaminate")(decontaminate.decontaminate)
app.command("trim")(trim.trim)
app.command("classify")(classify.classify)
app.command("estimate")(estimate.estimate)
app.command("pipeline")(pipeline.pipeline)
app.command("replicate")(replicate.replicate)
