from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from robustprod.core.config import DEFAULT_CF_DEGREE
from robustprod.enums.enums import Estimator, INPUT_MEASURES, Measure


class ModelSpec(BaseModel):
    """Cobb-Douglas specification in logs: y = sum(alpha_x * x) + omega + e"""

    dependent: Measure = Field(default=Measure.output)
    regressors: List[Measure] = Field(
        default_factory=lambda: list(INPUT_MEASURES),
        description="Ordered inputs (land, labour, capital, materials)",
    )
    year_dummies: bool = Field(default=True)
    estimator: Estimator = Field(default=Estimator.wlp)
    degree: int = Field(
        default=DEFAULT_CF_DEGREE,
        ge=1,
        description="Degree of the control-function polynomial",
    )
    proxy: Measure = Field(
        default=Measure.materials,
        description="Proxy variable of unobserved productivity",
    )
    state: Measure = Field(
        default=Measure.capital,
        description="Predetermined state variable entering the control function",
    )
    lag_depth: int = Field(
        default=1,
        ge=1,
        description="Deepest lag of the inputs used as instrument",
    )
    cluster: Literal["farm_id"] = Field(default="farm_id")

    model_config = ConfigDict(extra="ignore", frozen=True)

    @model_validator(mode="after")
    def _check_regressors(self):
        if not self.regressors:
            raise ValueError("at least one regressor is required")
        if len(set(self.regressors)) != len(self.regressors):
            raise ValueError("regressors must be distinct")
        if self.dependent in self.regressors:
            raise ValueError("the dependent variable cannot be a regressor")
        if self.proxy == self.state:
            raise ValueError("proxy and state variable must differ")
        return self

    @property
    def regressor_names(self) -> List[str]:
        return [m.value for m in self.regressors]


class EstimationResult(BaseModel):
    estimator: Estimator
    param_names: List[str]
    coefficients: Dict[str, float]
    std_errors: Dict[str, float]
    t_stats: Dict[str, float]
    p_values: Dict[str, float]
    covariance: List[List[float]] = Field(
        ..., description="Cluster-robust covariance in param_names order"
    )
    inputs: List[str] = Field(..., description="Coefficients entering the elasticity of scale")
    joint_test: List[str] = Field(
        ..., description="Coefficients tested jointly for the model p-value"
    )
    n_obs: int
    n_clusters: int
    n_params: int = Field(..., description="All estimated parameters incl. absorbed effects")
    rss: float
    elasticity_of_scale: float
    crs_p_value: Optional[float] = None
    model_p_value: Optional[float] = None
    scaled_rss: Optional[float] = None
    residuals: List[float] = Field(default_factory=list, exclude=True)

    model_config = ConfigDict(extra="ignore")

    def table_row(self) -> Dict[str, Optional[float]]:
        """Flat layout of the published estimation tables."""
        row: Dict[str, Optional[float]] = {}
        for name in self.inputs:
            row[name] = self.coefficients[name]
            row[f"{name}_se"] = self.std_errors[name]
        row["n"] = self.n_obs
        row["elasticity_of_scale"] = self.elasticity_of_scale
        row["crs_p_value"] = self.crs_p_value
        row["model_p_value"] = self.model_p_value
        row["scaled_rss"] = self.scaled_rss
        return row
