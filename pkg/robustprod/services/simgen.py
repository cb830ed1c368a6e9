"""
Synthetic panels.

``generate`` builds the two-input artificial example: 100 clean farms over 7
periods with y = 0.4 l + 0.6 k + omega_i + e, optionally contaminated by 20
farms following a different technology whose inputs are either uncorrelated
(sample I) or near-perfect substitutes (sample II).

``generate_proxy_panel`` builds a five-variable panel with persistent
productivity and a materials proxy for the proxy-variable estimator.
"""

from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from robustprod.enums.enums import CANONICAL_MEASURES, Measure, Scale, SimVariant
from robustprod.schemas.dataset import PanelDataset
from robustprod.schemas.simulation import ProxyPanelConfig, SimConfig, TruthLabels
from robustprod.utils.logger import logger_instance as log


FIRST_YEAR = 2001
SIM_MEASURES = [Measure.output, Measure.labour, Measure.capital]


def fresh_seed() -> int:
    """Seed drawn from OS entropy, for runs started without ``--seed``."""
    return int(np.random.SeedSequence().generate_state(1)[0])


def _farm_ids(start: int, count: int) -> list:
    return [f"farm_{i:03d}" for i in range(start + 1, start + count + 1)]


def _frame(farm_ids, periods: int, columns: dict) -> pd.DataFrame:
    farms = np.repeat(np.asarray(farm_ids, dtype=object), periods)
    years = np.tile(np.arange(FIRST_YEAR, FIRST_YEAR + periods), len(farm_ids))
    frame = pd.DataFrame({"farm_id": farms, "year": years})
    frame.insert(0, "record_id", [f"{f}:{y}" for f, y in zip(farms, years)])
    for name, values in columns.items():
        frame[name] = values
    return frame


def _uncorrelate(l: np.ndarray, k: np.ndarray) -> np.ndarray:
    """k residualized on l, rescaled to its former spread and mean."""
    lc, kc = l - l.mean(), k - k.mean()
    residual = kc - (lc @ kc) / (lc @ lc) * lc
    residual *= kc.std() / residual.std()
    return residual + k.mean()


def generate(
    config: SimConfig, variant: SimVariant = SimVariant.raw
) -> Tuple[PanelDataset, TruthLabels]:
    """Log-scale panel of (output, labour, capital) plus ground-truth labels."""
    seed = config.seed if config.seed is not None else fresh_seed()
    rng = np.random.default_rng(seed)
    T = config.periods

    n = config.n_clean_farms
    omega = np.repeat(rng.normal(0.0, np.sqrt(config.clean_omega_var), n), T)
    input_sd = np.sqrt(config.clean_input_var)
    l = rng.normal(config.clean_input_mean, input_sd, n * T)
    k = rng.normal(config.clean_input_mean, input_sd, n * T)
    e = rng.normal(0.0, np.sqrt(config.noise_var), n * T)
    y = config.clean_labour * l + config.clean_capital * k + omega + e

    clean_ids = _farm_ids(0, n)
    frames = [_frame(clean_ids, T, {"output": y, "labour": l, "capital": k})]
    outlier_ids = []

    if variant != SimVariant.raw:
        m = config.n_outlier_farms
        omega = np.repeat(
            rng.normal(config.outlier_omega_mean, np.sqrt(config.outlier_omega_var), m), T
        )
        input_sd = np.sqrt(config.outlier_input_var)
        l = rng.normal(config.outlier_input_mean, input_sd, m * T)
        if variant == SimVariant.sample1:
            k = _uncorrelate(l, rng.normal(config.outlier_input_mean, input_sd, m * T))
        else:
            # k mirrors l around the common mean
            jitter = rng.normal(0.0, config.jitter_share * input_sd, m * T)
            k = 2 * config.outlier_input_mean - l + jitter
        e = rng.normal(0.0, np.sqrt(config.noise_var), m * T)
        y = config.outlier_labour * l + config.outlier_capital * k + omega + e

        farms = _farm_ids(n, m)
        block = _frame(farms, T, {"output": y, "labour": l, "capital": k})
        frames.append(block)
        outlier_ids = block["record_id"].tolist()

    frame = pd.concat(frames, ignore_index=True)
    data = PanelDataset(frame=frame, scale=Scale.log, measures=list(SIM_MEASURES))
    truth = TruthLabels(outlier_ids=outlier_ids, variant=variant, seed=seed)

    log.info(
        "Simulated panel generated",
        extra={
            "variant": variant.value,
            "records": len(frame),
            "outliers": len(outlier_ids),
            "seed": seed,
        },
    )
    return data, truth


def _ar1(rng, persistence: float, innovation_sd: float, n: int, periods: int) -> np.ndarray:
    """n stationary AR(1) paths of length ``periods`` (n x periods)."""
    paths = np.empty((n, periods))
    paths[:, 0] = rng.normal(0.0, innovation_sd / np.sqrt(1 - persistence**2), n)
    for t in range(1, periods):
        paths[:, t] = persistence * paths[:, t - 1] + rng.normal(0.0, innovation_sd, n)
    return paths


def generate_proxy_panel(config: ProxyPanelConfig) -> Tuple[PanelDataset, TruthLabels]:
    """
    Log panel of all five measures.

    - omega: AR(1) productivity known to the farm when choosing labour and
      materials;
    - land and capital: farm level plus AR(1) deviations, fixed a period ahead;
    - labour: responds to current omega on top of a persistent own shock;
    - materials: omega + 0.5 capital + curvature * capital^2, strictly
      increasing in omega; the capital curvature moves materials apart from
      what lagged materials and capital predict.
    """
    seed = config.seed if config.seed is not None else fresh_seed()
    rng = np.random.default_rng(seed)
    n_total = config.n_farms + config.n_outlier_farms
    T = config.periods

    omega = _ar1(rng, config.omega_persistence, config.omega_innovation_sd, n_total, T)
    land = rng.normal(0.0, 1.0, (n_total, 1)) + _ar1(rng, 0.8, 0.2, n_total, T)
    capital = rng.normal(0.0, 1.0, (n_total, 1)) + _ar1(rng, 0.8, 0.4, n_total, T)
    labour = config.labour_response * omega + _ar1(
        rng, config.labour_persistence, 0.5, n_total, T
    )
    materials = omega + 0.5 * capital + config.materials_curvature * capital**2
    noise = rng.normal(0.0, config.noise_sd, (n_total, T))

    inputs = {
        Measure.land: land,
        Measure.labour: labour,
        Measure.capital: capital,
        Measure.materials: materials,
    }
    outlier = np.zeros((n_total, 1), dtype=bool)
    outlier[config.n_farms :] = True
    for measure in inputs:
        inputs[measure] = np.where(outlier, inputs[measure] + config.outlier_shift, inputs[measure])

    def technology(elasticities):
        return sum(elasticities.get(m.value, 0.0) * inputs[m] for m in inputs)

    output = np.where(
        outlier,
        technology(config.outlier_elasticities),
        technology(config.elasticities),
    ) + omega + noise

    columns = {m.value: inputs[m].ravel() for m in inputs}
    columns[Measure.output.value] = output.ravel()
    ordered = {m.value: columns[m.value] for m in CANONICAL_MEASURES}

    frame = _frame(_farm_ids(0, n_total), T, ordered)
    outlier_rows = np.repeat(outlier.ravel(), T)
    truth = TruthLabels(
        outlier_ids=frame.loc[outlier_rows, "record_id"].tolist(), variant=None, seed=seed
    )
    data = PanelDataset(frame=frame, scale=Scale.log, measures=list(CANONICAL_MEASURES))

    log.info(
        "Proxy panel generated",
        extra={"records": len(frame), "outliers": truth.n_outliers, "seed": seed},
    )
    return data, truth


def write_labels(truth: TruthLabels, path: Union[str, Path], all_ids: Optional[list] = None):
    """``record_id,outlier`` rows; with ``all_ids`` clean records are listed too."""
    flagged = set(truth.outlier_ids)
    ids = all_ids if all_ids is not None else truth.outlier_ids
    pd.DataFrame(
        {"record_id": ids, "outlier": [int(i in flagged) for i in ids]}
    ).to_csv(path, index=False)
