from pathlib import Path
from typing import Annotated, Optional

import typer

from robustprod.cli.commands.estimate import (
    ClusterOpt,
    DegreeOpt,
    LagDepthOpt,
    RegressorsOpt,
    YearDummiesOpt,
    build_spec,
)
from robustprod.cli.options import (
    DEFAULT_DELIMITER,
    AlphaOpt,
    BaseYearOpt,
    ColumnsOpt,
    DeflatorsOpt,
    DelimiterOpt,
    DimsOpt,
    FadnOpt,
    FormatOpt,
    MeasuresOpt,
    ReportOpt,
    ScaleOpt,
    load_input,
    parse_measures,
)
from robustprod.core.config import DEFAULT_ALPHA, DEFAULT_CF_DEGREE, DEFAULT_IQR_SCALE, DEFAULT_MIN_RUN
from robustprod.decorators.cli_error_handler import cli_error_handler
from robustprod.enums.enums import Estimator, Measure, ReportFormat, Scale, SimVariant
from robustprod.schemas.pipeline import PipelineConfig
from robustprod.schemas.simulation import SimConfig
from robustprod.services.pipeline import run_pipeline
from robustprod.services.report import emit, pipeline_table
from robustprod.services.simgen import fresh_seed, generate


@cli_error_handler("pipeline")
def pipeline(
    input: Annotated[
        Optional[Path],
        typer.Option(
            "--input",
            "-i",
            exists=True,
            dir_okay=False,
            readable=True,
            help="Panel file; a simulated panel is generated when omitted",
        ),
    ] = None,
    variant: Annotated[
        SimVariant, typer.Option("--variant", help="Simulated variant without --input")
    ] = SimVariant.sample1,
    seed: Annotated[
        Optional[int], typer.Option("--seed", min=0, help="Drawn and printed when omitted")
    ] = None,
    alpha: AlphaOpt = DEFAULT_ALPHA,
    standardize: Annotated[bool, typer.Option("--standardize")] = False,
    dims: DimsOpt = "all",
    ratio: Annotated[str, typer.Option("--ratio")] = "output/capital",
    per_farm: Annotated[bool, typer.Option("--per-farm/--per-record")] = True,
    s: Annotated[float, typer.Option("--s", help="IQR scale factor")] = DEFAULT_IQR_SCALE,
    keep_neither: Annotated[
        bool,
        typer.Option(
            "--keep-neither/--drop-neither",
            help="small-large sample keeps outliers labelled neither",
        ),
    ] = True,
    min_run: Annotated[
        Optional[int],
        typer.Option(
            "--min-run",
            min=1,
            help=f"Consecutive-year filter applied after cleaning (default {DEFAULT_MIN_RUN})",
        ),
    ] = None,
    estimator: Annotated[
        Optional[Estimator],
        typer.Option("--estimator", help="Default: wlp when materials and capital are loaded"),
    ] = None,
    regressors: RegressorsOpt = None,
    degree: DegreeOpt = DEFAULT_CF_DEGREE,
    year_dummies: YearDummiesOpt = True,
    cluster: ClusterOpt = "farm",
    lag_depth: LagDepthOpt = 1,
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
    """Run every stage and compare the no-out, uni-out, full-out and small-large samples."""
    table = None
    provenance = {}
    if input is not None:
        data, table = load_input(
            input, columns, fadn, measures, scale, delimiter, deflators, base_year
        )
        provenance["input"] = input.name
    else:
        if seed is None:
            seed = fresh_seed()
            typer.echo(f"seed={seed}", err=True)
        data, _ = generate(SimConfig(seed=seed), variant)
        provenance["simulated"] = variant.value
    run = DEFAULT_MIN_RUN if min_run is None else min_run

    proxy_ready = Measure.materials in data.measures and Measure.capital in data.measures
    spec = build_spec(
        data.measures,
        regressors,
        estimator or (Estimator.wlp if proxy_ready else Estimator.within),
        degree,
        year_dummies,
        cluster,
        Measure.materials,
        Measure.capital,
        lag_depth,
    )

    config = PipelineConfig(
        alpha=alpha,
        standardize=standardize,
        dims=parse_measures(dims),
        iqr_scale=s,
        ratio=ratio,
        per_farm=per_farm,
        keep_neither=keep_neither,
        min_run=run,
        spec=spec,
        seed=seed,
    )
    result = run_pipeline(data, config, deflators=table, provenance=provenance)
    emit(result, fmt, report, table=pipeline_table(result), title="pipeline")
