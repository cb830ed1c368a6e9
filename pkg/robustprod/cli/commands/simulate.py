from pathlib import Path
from typing import Annotated, Optional

import typer

from robustprod.cli.options import ReportOpt
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.enums.enums import SimVariant
from robustprod.schemas.simulation import ProxyPanelConfig, SimConfig
from robustprod.services.dataset import write_panel
from robustprod.services.report import emit
from robustprod.services.simgen import fresh_seed, generate, generate_proxy_panel, write_labels


@cli_error_handler("simulate")
def simulate(
    out: Annotated[Path, typer.Option("--out", help="Panel CSV to write (log scale)")],
    variant: Annotated[
        SimVariant, typer.Option("--variant", help="raw, sample1 (cor 0) or sample2 (cor -1)")
    ] = SimVariant.sample1,
    seed: Annotated[
        Optional[int], typer.Option("--seed", min=0, help="Drawn and printed when omitted")
    ] = None,
    labels: Annotated[
        Optional[Path], typer.Option("--labels", help="record_id,outlier ground-truth CSV")
    ] = None,
    proxy_panel: Annotated[
        bool,
        typer.Option(
            "--proxy-panel",
            help="Five-measure panel with persistent productivity instead of the two-input example",
        ),
    ] = False,
    farms: Annotated[
        Optional[int], typer.Option("--farms", min=2, help="Clean farms")
    ] = None,
    outlier_farms: Annotated[
        Optional[int], typer.Option("--outlier-farms", min=0, help="Contaminating farms")
    ] = None,
    periods: Annotated[Optional[int], typer.Option("--periods", min=2)] = None,
    report: ReportOpt = None,
):
    """Generate a synthetic panel with ground-truth outlier labels."""
    if seed is None:
        seed = fresh_seed()
        typer.echo(f"seed={seed}", err=True)

    overrides = {"seed": seed}
    if periods is not None:
        overrides["periods"] = periods
    if proxy_panel:
        if farms is not None:
            overrides["n_farms"] = farms
        if outlier_farms is not None:
            overrides["n_outlier_farms"] = outlier_farms
        data, truth = generate_proxy_panel(ProxyPanelConfig(**overrides))
    else:
        if farms is not None:
            overrides["n_clean_farms"] = farms
        if outlier_farms is not None:
            overrides["n_outlier_farms"] = outlier_farms
        data, truth = generate(SimConfig(**overrides), variant)

    write_panel(data, out)
    if labels is not None:
        write_labels(truth, labels, all_ids=data.record_ids)

    emit(
        {
            "out": str(out),
            "records": data.n_records,
            "outliers": truth.n_outliers,
            "variant": None if proxy_panel else variant.value,
            "seed": seed,
            "measures": data.measure_columns,
            "scale": data.scale.value,
        },
        path=report,
    )
