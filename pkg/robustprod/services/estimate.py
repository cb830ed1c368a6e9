"""
Cobb-Douglas production functions on log panels.

- ``within_fit``: fixed-effects OLS after demeaning within farm.
- ``wlp_fit``: one-step proxy-variable IV estimator. Unobserved productivity
  is controlled by a polynomial in lagged proxy and state variable; lagged
  inputs instrument the current, freely chosen inputs. Estimated by 2SLS.

Fits and clustered covariances come from ``linearmodels``; this module builds
the designs, checks identification and adds the CRS, joint and RSS layer.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from linearmodels.iv import IV2SLS
from scipy import linalg, stats
from sklearn.preprocessing import PolynomialFeatures

from robustprod.core.config import WEAK_INSTRUMENT_F
from robustprod.core.exceptions import (
    CollinearityError,
    DegreesOfFreedomError,
    InsufficientObservationsError,
    InvalidParameterError,
    InvalidScaleError,
    RankDeficientInstrumentsError,
    SingularCovarianceError,
    UnderidentifiedError,
)
from robustprod.enums.enums import Estimator, Scale
from robustprod.schemas.dataset import PanelDataset
from robustprod.schemas.estimation import EstimationResult, ModelSpec
from robustprod.utils.logger import logger_instance as log


CONSTANT = "const"


# ---------------------------------------------------------------------------
# Fitting helpers
# ---------------------------------------------------------------------------


def clustered_fit(
    dependent: pd.Series,
    exog: pd.DataFrame,
    clusters: Sequence,
    endog: Optional[pd.DataFrame] = None,
    instruments: Optional[pd.DataFrame] = None,
    n_params: Optional[int] = None,
    order: Optional[Sequence[str]] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    OLS (no ``endog``) or 2SLS with a cluster-robust sandwich scaled by
    G/(G-1) * (N-1)/(N-K).

    ``n_params`` (K) defaults to the design width and should include absorbed
    effects. Returns (coefficients, residuals, covariance) with coefficients
    in ``order``, by default ``exog`` then ``endog`` columns.
    """
    n = len(dependent)
    names = [*exog.columns, *([] if endog is None else endog.columns)]
    if order is not None:
        names = list(order)
    width = len(names)
    n_params = width if n_params is None else n_params
    codes, uniques = pd.factorize(pd.Series(list(clusters)), sort=True)
    if len(uniques) < 2:
        raise DegreesOfFreedomError("Cluster-robust covariance needs at least 2 clusters")
    if n <= n_params:
        raise DegreesOfFreedomError(
            f"No residual degrees of freedom: N={n}, K={n_params}",
            details={"n": n, "k": n_params},
        )

    results = IV2SLS(dependent, exog, endog, instruments).fit(
        cov_type="clustered", clusters=codes, debiased=True
    )
    beta = results.params[names].to_numpy()
    covariance = results.cov.loc[names, names].to_numpy() * (n - width) / (n - n_params)
    residuals = results.resids.to_numpy()
    return beta, residuals, (covariance + covariance.T) / 2


def first_stage_f(
    exog: pd.DataFrame, endog: pd.DataFrame, instruments: pd.DataFrame, dependent: pd.Series
) -> pd.Series:
    """Partial F of the excluded instruments in each first-stage regression."""
    results = IV2SLS(dependent, exog, endog, instruments).fit(cov_type="unadjusted")
    return results.first_stage.diagnostics["f.stat"].astype(float)


def dependent_columns(matrix: np.ndarray, names: Sequence[str]) -> List[str]:
    """Columns left over by a rank-revealing (pivoted) QR."""
    if matrix.shape[1] == 0:
        return []
    R, pivot = linalg.qr(matrix, mode="r", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = (diag.max() if diag.size else 0.0) * max(matrix.shape) * np.finfo(float).eps
    rank = int((diag > tol).sum())
    return [names[i] for i in pivot[rank:]]


def wald_test(
    coefficients: np.ndarray,
    covariance: np.ndarray,
    restriction: np.ndarray,
    target: np.ndarray,
) -> Tuple[float, float]:
    """Wald statistic and chi-square p-value for H0: R b = r."""
    restriction = np.atleast_2d(restriction)
    gap = restriction @ coefficients - np.atleast_1d(target)
    middle = restriction @ covariance @ restriction.T
    eigen = np.linalg.eigvalsh(middle)
    if not np.isfinite(eigen).all() or eigen.min() <= eigen.max() * 1e-12 or eigen.max() <= 0:
        raise SingularCovarianceError(
            "Restriction covariance block is singular",
            details={"eigenvalues": eigen.tolist()},
        )
    statistic = float(gap @ np.linalg.solve(middle, gap))
    return statistic, float(stats.chi2.sf(statistic, df=restriction.shape[0]))


# ---------------------------------------------------------------------------
# Tests on a fitted result
# ---------------------------------------------------------------------------


def _positions(result: EstimationResult, names: Sequence[str]) -> List[int]:
    return [result.param_names.index(name) for name in names]


def wald_crs(result: EstimationResult) -> float:
    """p-value of H0: input elasticities sum to one."""
    positions = _positions(result, result.inputs)
    beta = np.array([result.coefficients[name] for name in result.param_names])
    restriction = np.zeros(len(result.param_names))
    restriction[positions] = 1.0
    _, p_value = wald_test(beta, np.asarray(result.covariance), restriction, 1.0)
    return p_value


def model_p_value(result: EstimationResult) -> float:
    """p-value of H0: every non-intercept, non-dummy coefficient is zero."""
    positions = _positions(result, result.joint_test)
    beta = np.array([result.coefficients[name] for name in result.param_names])
    restriction = np.zeros((len(positions), len(result.param_names)))
    restriction[np.arange(len(positions)), positions] = 1.0
    _, p_value = wald_test(
        beta, np.asarray(result.covariance), restriction, np.zeros(len(positions))
    )
    return p_value


def scaled_rss(result: EstimationResult) -> float:
    """RSS / (N - K), K counting every estimated parameter."""
    if result.n_obs <= result.n_params:
        raise DegreesOfFreedomError(
            f"N={result.n_obs} does not exceed K={result.n_params}",
            details={"n": result.n_obs, "k": result.n_params},
        )
    return result.rss / (result.n_obs - result.n_params)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _prepare(data: PanelDataset, spec: ModelSpec, extra=()) -> pd.DataFrame:
    if data.scale != Scale.log:
        raise InvalidScaleError(
            f"Production functions are estimated on log panels, got {data.scale.value}"
        )
    needed = [spec.dependent, *spec.regressors, *extra]
    missing = sorted({m.value for m in needed if m not in data.measures})
    if missing:
        raise InvalidParameterError(
            f"Measure(s) not in dataset: {', '.join(missing)}",
            details={"measures": data.measure_columns},
        )
    return data.frame.sort_values(["farm_id", "year"], kind="mergesort").reset_index(
        drop=True
    )


def _year_dummies(years: pd.Series) -> pd.DataFrame:
    dummies = pd.get_dummies(years, prefix="year", drop_first=True, dtype=float)
    return dummies.set_axis([str(c) for c in dummies.columns], axis=1)


def _assemble(
    estimator: Estimator,
    names: List[str],
    beta: np.ndarray,
    covariance: np.ndarray,
    residuals: np.ndarray,
    inputs: List[str],
    joint: List[str],
    n_clusters: int,
    n_params: int,
) -> EstimationResult:
    std_errors = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(std_errors > 0, beta / std_errors, np.nan)
    p_values = 2.0 * stats.t.sf(np.abs(t_stats), df=n_clusters - 1)

    result = EstimationResult(
        estimator=estimator,
        param_names=names,
        coefficients=dict(zip(names, beta.tolist())),
        std_errors=dict(zip(names, std_errors.tolist())),
        t_stats=dict(zip(names, t_stats.tolist())),
        p_values=dict(zip(names, p_values.tolist())),
        covariance=covariance.tolist(),
        inputs=inputs,
        joint_test=joint,
        n_obs=int(residuals.size),
        n_clusters=n_clusters,
        n_params=n_params,
        rss=float(residuals @ residuals),
        elasticity_of_scale=float(sum(beta[names.index(name)] for name in inputs)),
        residuals=residuals.tolist(),
    )

    updates = {"scaled_rss": scaled_rss(result)}
    for field, test in (("crs_p_value", wald_crs), ("model_p_value", model_p_value)):
        try:
            updates[field] = test(result)
        except SingularCovarianceError as e:
            log.warning(
                "Wald test skipped",
                extra={"test": field, "reason": e.message, "estimator": estimator.value},
            )
    return result.model_copy(update=updates)


def within_fit(data: PanelDataset, spec: ModelSpec) -> EstimationResult:
    frame = _prepare(data, spec)

    sizes = frame.groupby("farm_id")["farm_id"].transform("size")
    singletons = int((sizes < 2).sum())
    if singletons:
        log.warning(
            "Farms with a single observation dropped from the within fit",
            extra={"dropped": singletons},
        )
        frame = frame[sizes >= 2].reset_index(drop=True)
    if frame["farm_id"].nunique() < 2:
        raise InsufficientObservationsError(
            "Within estimation needs at least two farms with two observations each"
        )

    regressors = spec.regressor_names
    columns = frame[[spec.dependent.value, *regressors]].astype(float)
    if spec.year_dummies:
        columns = pd.concat([columns, _year_dummies(frame["year"])], axis=1)
    names = [c for c in columns.columns if c != spec.dependent.value]

    demeaned = columns - columns.groupby(frame["farm_id"]).transform("mean")

    collinear = dependent_columns(demeaned[names].to_numpy(), names)
    if collinear:
        raise CollinearityError(
            f"Regressors not identified after demeaning: {', '.join(collinear)}",
            details={"columns": collinear},
        )

    n_clusters = int(frame["farm_id"].nunique())
    n_params = len(names) + n_clusters
    beta, residuals, covariance = clustered_fit(
        demeaned[spec.dependent.value], demeaned[names], frame["farm_id"], n_params=n_params
    )

    result = _assemble(
        Estimator.within,
        names,
        beta,
        covariance,
        residuals,
        inputs=regressors,
        joint=regressors,
        n_clusters=n_clusters,
        n_params=n_params,
    )
    _log_fit(result)
    return result


def add_lags(frame: pd.DataFrame, columns: Sequence[str], depth: int) -> pd.DataFrame:
    """
    ``<col>_lag<L>`` for L = 1..depth, set only when the farm was observed
    exactly L years earlier. ``frame`` must be sorted by farm and year.
    """
    grouped = frame.groupby("farm_id", sort=False)
    lagged = {}
    for lag in range(1, depth + 1):
        valid = (frame["year"] - grouped["year"].shift(lag)) == lag
        shifted = grouped[list(columns)].shift(lag)
        for column in columns:
            lagged[f"{column}_lag{lag}"] = shifted[column].where(valid)
    return pd.concat([frame, pd.DataFrame(lagged, index=frame.index)], axis=1)


def _polynomial(values: np.ndarray, names: List[str], degree: int, exact: bool = False):
    """Polynomial terms without bias; ``exact`` keeps only terms of total degree ``degree``."""
    poly = PolynomialFeatures(degree=degree, include_bias=False).fit(values)
    terms = poly.transform(values)
    labels = [n.replace(" ", "*") for n in poly.get_feature_names_out(names)]
    if exact:
        keep = poly.powers_.sum(axis=1) == degree
        terms = terms[:, keep]
        labels = [label for label, k in zip(labels, keep) if k]
    return pd.DataFrame(terms, columns=labels)


def wlp_fit(data: PanelDataset, spec: ModelSpec) -> EstimationResult:
    frame = _prepare(data, spec, extra=(spec.proxy, spec.state))

    regressors = spec.regressor_names
    proxy, state = spec.proxy.value, spec.state.value
    endogenous = [r for r in regressors if r != state]
    lagged_vars = list(dict.fromkeys([*endogenous, proxy, state]))

    frame = add_lags(frame, lagged_vars, spec.lag_depth)
    needed = [f"{v}_lag{lag}" for v in lagged_vars for lag in range(1, spec.lag_depth + 1)]
    usable = frame[needed].notna().all(axis=1)
    frame = frame[usable].reset_index(drop=True)
    if frame.empty:
        raise InsufficientObservationsError(
            "No observation has the lagged values the proxy estimator needs",
            details={"lag_depth": spec.lag_depth},
        )

    cf_inputs = [f"{proxy}_lag1", f"{state}_lag1"]
    control = _polynomial(frame[cf_inputs].to_numpy(), cf_inputs, spec.degree)

    included = pd.DataFrame({CONSTANT: np.ones(len(frame))})
    if spec.year_dummies:
        included = pd.concat(
            [included, _year_dummies(frame["year"]).reset_index(drop=True)], axis=1
        )
    included = pd.concat([included, control], axis=1)

    excluded = {}
    for column in endogenous:
        if column != proxy:
            excluded[f"{column}_lag1"] = frame[f"{column}_lag1"]
    if state not in regressors:
        excluded[state] = frame[state]
    for lag in range(2, spec.lag_depth + 1):
        for column in lagged_vars:
            excluded[f"{column}_lag{lag}"] = frame[f"{column}_lag{lag}"]
    excluded = pd.DataFrame(excluded, index=frame.index)
    if proxy in regressors and spec.degree >= 2:
        # functions of the current state instrument the proxy
        powers = [
            _polynomial(frame[[state]].to_numpy(), [state], power, exact=True)
            for power in range(2, spec.degree + 1)
        ]
        excluded = pd.concat([excluded, *powers], axis=1)

    X_frame = pd.concat([frame[regressors], included], axis=1)
    exogenous_regressors = [state] if state in regressors else []
    exog = pd.concat([frame[exogenous_regressors], included], axis=1)
    Z_frame = pd.concat([exog, excluded], axis=1)
    names = list(X_frame.columns)
    instruments = list(Z_frame.columns)

    if len(instruments) < len(names):
        raise UnderidentifiedError(
            f"{len(instruments)} instruments for {len(names)} parameters",
            details={"instruments": instruments, "parameters": names},
        )

    X = X_frame.to_numpy(dtype=float)
    Z = Z_frame.to_numpy(dtype=float)
    y = frame[spec.dependent.value].astype(float)

    rank_gaps = dependent_columns(Z, instruments)
    if rank_gaps:
        raise RankDeficientInstrumentsError(
            f"Instrument matrix is rank deficient: {', '.join(rank_gaps)}",
            details={"columns": rank_gaps},
        )

    first_stage, *_ = np.linalg.lstsq(Z, X, rcond=None)
    unidentified = dependent_columns(Z @ first_stage, names)
    if unidentified:
        raise UnderidentifiedError(
            f"Parameters not identified by the instruments: {', '.join(unidentified)}",
            details={"columns": unidentified},
        )

    endog = frame[endogenous].astype(float)
    if endogenous:
        strength = first_stage_f(exog, endog, excluded, y)
        weak = strength[strength < WEAK_INSTRUMENT_F]
        if not weak.empty:
            raise UnderidentifiedError(
                f"Weak instruments for: {', '.join(weak.index)}",
                details={
                    "first_stage_f": {k: round(v, 4) for k, v in strength.items()},
                    "threshold": WEAK_INSTRUMENT_F,
                },
            )

    n_clusters = int(frame["farm_id"].nunique())
    beta, residuals, covariance = clustered_fit(
        y,
        exog,
        frame["farm_id"],
        endog=endog if endogenous else None,
        instruments=excluded if endogenous else None,
        order=names,
    )

    result = _assemble(
        Estimator.wlp,
        names,
        beta,
        covariance,
        residuals,
        inputs=regressors,
        joint=[*regressors, *control.columns],
        n_clusters=n_clusters,
        n_params=len(names),
    )
    _log_fit(result, instruments=len(instruments))
    return result


def fit(data: PanelDataset, spec: ModelSpec) -> EstimationResult:
    if spec.estimator == Estimator.within:
        return within_fit(data, spec)
    return wlp_fit(data, spec)


def _log_fit(result: EstimationResult, **extra):
    log.info(
        "Production function estimated",
        extra={
            "estimator": result.estimator.value,
            "n": result.n_obs,
            "farms": result.n_clusters,
            "elasticity_of_scale": round(result.elasticity_of_scale, 6),
            "crs_p_value": result.crs_p_value,
            **extra,
        },
    )
