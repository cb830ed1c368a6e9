"""
Monte-Carlo replication of the simulated decontamination comparison.

Every replication draws its own seed from ``SeedSequence(master_seed)`` so
results do not depend on the number of workers.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple

import numpy as np
import pandas as pd

from robustprod.enums.enums import Estimator, Measure
from robustprod.schemas.estimation import ModelSpec
from robustprod.schemas.montecarlo import (
    CellSummary,
    ReplicationRow,
    StudyConfig,
    StudySummary,
)
from robustprod.schemas.pipeline import PipelineConfig
from robustprod.services.pipeline import run_pipeline
from robustprod.services.simgen import generate
from robustprod.utils.logger import logger_instance as log


SIM_SPEC = ModelSpec(
    regressors=[Measure.labour, Measure.capital],
    estimator=Estimator.within,
)


def replication_seeds(master_seed: int, replications: int) -> List[int]:
    children = np.random.SeedSequence(master_seed).spawn(replications)
    return [int(child.generate_state(1)[0]) for child in children]


def run_replication(task: Tuple[int, int, StudyConfig]) -> List[ReplicationRow]:
    replication, seed, config = task
    pipeline_config = PipelineConfig(
        alpha=config.alpha,
        iqr_scale=config.iqr_scale,
        min_run=config.min_run,
        schemes=config.schemes,
        spec=SIM_SPEC,
        seed=seed,
    )

    rows = []
    for variant in config.variants:
        data, truth = generate(config.sim.model_copy(update={"seed": seed}), variant)
        report = run_pipeline(data, pipeline_config)
        planted = set(truth.outlier_ids)
        for sample in report.samples:
            coefficients = sample.estimation.coefficients
            rows.append(
                ReplicationRow(
                    replication=replication,
                    seed=seed,
                    variant=variant,
                    scheme=sample.scheme,
                    labour=coefficients[Measure.labour.value],
                    capital=coefficients[Measure.capital.value],
                    n=sample.estimation.n_obs,
                    planted_outliers_kept=len(planted.intersection(sample.record_ids)),
                )
            )
    return rows


def summarize(rows: List[ReplicationRow]) -> List[CellSummary]:
    frame = pd.DataFrame([row.model_dump() for row in rows])
    cells = []
    for (variant, scheme), group in frame.groupby(["variant", "scheme"], sort=False):
        cells.append(
            CellSummary(
                variant=variant,
                scheme=scheme,
                replications=len(group),
                labour_mean=float(group["labour"].mean()),
                labour_sd=float(group["labour"].std(ddof=1)) if len(group) > 1 else 0.0,
                capital_mean=float(group["capital"].mean()),
                capital_sd=float(group["capital"].std(ddof=1)) if len(group) > 1 else 0.0,
                n_mean=float(group["n"].mean()),
                share_labour_below_030=float((group["labour"] < 0.30).mean()),
                share_capital_above_070=float((group["capital"] > 0.70).mean()),
                planted_outliers_kept_mean=float(group["planted_outliers_kept"].mean()),
            )
        )
    return cells


def simulation_study(config: StudyConfig) -> StudySummary:
    seeds = replication_seeds(config.master_seed, config.replications)
    tasks = [(r, seed, config) for r, seed in enumerate(seeds)]
    log.info(
        "Simulation study started",
        extra={
            "replications": config.replications,
            "master_seed": config.master_seed,
            "workers": config.workers,
        },
    )

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            batches = list(pool.map(run_replication, tasks))
    else:
        batches = [run_replication(task) for task in tasks]

    rows = [row for batch in batches for row in batch]
    summary = StudySummary(config=config, cells=summarize(rows), rows=rows)
    log.info("Simulation study finished", extra={"cells": len(summary.cells)})
    return summary
