"""
End-to-end comparison of decontamination schemes:

    (deflate) -> log -> cloud -> pMST -> classify -> IQR trim
    -> per scheme: consecutive-run filter -> estimate

Schemes: no-out (everything), uni-out (IQR-trimmed), full-out (pMST
non-outliers), small-large (drop outliers labelled small or large).
"""

import platform
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import scipy
import sklearn

import robustprod
from robustprod.enums.enums import (
    INPUT_MEASURES,
    DecontaminationScheme,
    Estimator,
    OutlierLabel,
    Scale,
)
from robustprod.schemas.dataset import DeflatorTable, PanelDataset
from robustprod.schemas.decontamination import PruneConfig
from robustprod.schemas.estimation import ModelSpec
from robustprod.schemas.pipeline import (
    DecontaminationSummary,
    PipelineConfig,
    PipelineReport,
    SampleReport,
    TrimSummary,
)
from robustprod.schemas.univariate import TrimRule
from robustprod.services.classify import build_boundaries, classify_outliers
from robustprod.services.dataset import (
    deflate,
    filter_min_consecutive,
    log_transform,
    to_point_cloud,
)
from robustprod.services.estimate import fit
from robustprod.services.pmst import decontaminate
from robustprod.services.univariate import trim
from robustprod.utils.logger import logger_instance as log


def versions() -> Dict[str, str]:
    return {
        "robustprod": robustprod.__version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "pandas": pd.__version__,
        "scipy": scipy.__version__,
        "scikit-learn": sklearn.__version__,
    }


def resolve_spec(data: PanelDataset, spec: Optional[ModelSpec]) -> ModelSpec:
    """
    The given spec, or every input of the panel as regressor with the proxy
    estimator when materials and capital are present, the within estimator
    otherwise.
    """
    if spec is not None:
        return spec
    regressors = [m for m in INPUT_MEASURES if m in data.measures]
    defaults = ModelSpec()
    proxy_ready = defaults.proxy in data.measures and defaults.state in data.measures
    return ModelSpec(
        regressors=regressors,
        estimator=Estimator.wlp if proxy_ready else Estimator.within,
    )


def prepare(data: PanelDataset, deflators: Optional[DeflatorTable] = None) -> PanelDataset:
    """Bring a panel to log scale, deflating raw data when indices are given."""
    if data.scale == Scale.log:
        return data
    if deflators is not None and data.scale == Scale.raw:
        data = deflate(data, deflators)
    return log_transform(data)


def run_pipeline(
    data: PanelDataset,
    config: Optional[PipelineConfig] = None,
    deflators: Optional[DeflatorTable] = None,
    provenance: Optional[dict] = None,
) -> PipelineReport:
    config = config or PipelineConfig()
    counts = {"loaded": data.n_records, "rejected": len(data.rejects)}

    data = prepare(data, deflators)
    spec = resolve_spec(data, config.spec)

    cloud = to_point_cloud(data, config.dims)
    decon = decontaminate(
        cloud, PruneConfig(alpha=config.alpha, standardize=config.standardize)
    )
    position = {record_id: i for i, record_id in enumerate(cloud.ids)}
    boundary = build_boundaries(cloud.take([position[i] for i in decon.non_outlier_ids]))
    labels = classify_outliers(cloud.take([position[i] for i in decon.outlier_ids]), boundary)

    rule = TrimRule.parse_ratio(
        config.ratio, scale_factor=config.iqr_scale, per_farm=config.per_farm
    )
    trimmed = trim(data, rule)

    dropped = {OutlierLabel.small, OutlierLabel.large}
    if not config.keep_neither:
        dropped.add(OutlierLabel.neither)
    removed = set(labels.ids_with(*dropped))

    selections: Dict[DecontaminationScheme, List[str]] = {
        DecontaminationScheme.no_out: data.record_ids,
        DecontaminationScheme.uni_out: trimmed.kept_ids,
        DecontaminationScheme.full_out: decon.non_outlier_ids,
        DecontaminationScheme.small_large: [i for i in data.record_ids if i not in removed],
    }

    counts.update(
        {
            "cloud": cloud.n,
            "core": len(decon.core_ids),
            "non_outliers": len(decon.non_outlier_ids),
            "outliers": len(decon.outlier_ids),
            "trimmed": len(trimmed.trimmed_ids),
        }
    )

    samples = []
    for scheme in config.schemes:
        selected = selections[scheme]
        sample = filter_min_consecutive(data, selected, config.min_run)
        estimation = fit(sample, spec)
        samples.append(
            SampleReport(
                scheme=scheme,
                selected=len(selected),
                n_records=sample.n_records,
                n_farms=int(sample.frame["farm_id"].nunique()),
                estimation=estimation,
                record_ids=sample.record_ids,
            )
        )
        counts[f"{scheme.value}:estimated"] = estimation.n_obs

    report = PipelineReport(
        provenance={
            **(provenance or {}),
            "config": config.model_dump(mode="json"),
            "spec": spec.model_dump(mode="json"),
            "seed": config.seed,
            "versions": versions(),
        },
        stage_counts=counts,
        decontamination=DecontaminationSummary(
            n=decon.n,
            core=len(decon.core_ids),
            non_outliers=len(decon.non_outlier_ids),
            outliers=len(decon.outlier_ids),
            breakdown_bound=decon.breakdown_bound,
            w_crit=decon.w_crit,
            reweighting_note=decon.reweighting_note,
        ),
        classification=labels.counts(),
        trim=TrimSummary(
            kept=len(trimmed.kept_ids),
            trimmed=len(trimmed.trimmed_ids),
            lower=trimmed.lower,
            upper=trimmed.upper,
            per_farm=trimmed.per_farm,
        ),
        samples=samples,
    )
    log.info("Pipeline finished", extra=counts)
    return report
