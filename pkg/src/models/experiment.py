"""
Experiment configuration and result models
"""
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.models.glm import Dataset, LossKind, RidgeConvention
from src.models.influence import InfluenceRecord


class Estimator(str, Enum):
    TRUE = "true"
    IF = "if"
    CORRECTED_IF = "corrected_if"
    NEW = "new"


ALL_ESTIMATORS: FrozenSet[Estimator] = frozenset(Estimator)


class ExperimentConfig(BaseModel):
    """One synthetic logistic-ridge run: gamma = n/p, m unseen test points"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    n: int = Field(ge=1)
    p: int = Field(ge=1)
    lam: float = Field(alias="lambda", gt=0.0)
    m: int = Field(default=100, ge=1, alias="tests")
    seed: int = Field(default=0, ge=0)
    loss: LossKind = LossKind.LOGISTIC
    estimators: FrozenSet[Estimator] = ALL_ESTIMATORS
    ridge_convention: RidgeConvention = RidgeConvention.PAPER
    replicates: int = Field(default=1, ge=1)

    @field_validator("estimators", mode="before")
    @classmethod
    def _parse_estimators(cls, value):
        if isinstance(value, str):
            value = [item.strip() for item in value.split(",") if item.strip()]
        estimators = frozenset(Estimator(item) for item in value)
        if not estimators:
            raise ValueError("At least one estimator is required")
        return estimators


class SyntheticInstance(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    train: Dataset
    test: Dataset
    beta_star: np.ndarray


class TableRow(BaseModel):
    """Kendall tau summary of one (n, p, lambda) configuration; None = estimator not run"""

    n: int
    p: int
    lam: float = Field(alias="lambda")
    df_ratio: float
    tau_new_mean: Optional[float] = None
    tau_new_std: Optional[float] = None
    tau_if_mean: Optional[float] = None
    tau_if_std: Optional[float] = None
    tau_corrected_mean: Optional[float] = None
    tau_corrected_std: Optional[float] = None

    model_config = ConfigDict(frozen=True, populate_by_name=True)


class ExperimentResult(BaseModel):
    rows: List[TableRow]
    records: List[InfluenceRecord]


class FitSummary(BaseModel):
    """Summary of a full-data fit and its leverage diagnostics"""
    n: int
    p: int
    lam: float = Field(alias="lambda")
    objective_value: float
    grad_norm: float
    iterations: int
    converged: bool
    df: float
    df_ratio: float

    model_config = ConfigDict(frozen=True, populate_by_name=True)


class ErrorSummary(BaseModel):
    """Accuracy of the approximate influences against the exact refits"""
    median_abs_error_if: float
    median_abs_error_corrected: float
    median_abs_error_new: float
    slope_new_vs_true: float
    slope_if_vs_true: float
    slope_if_vs_scaled_true: float


class TablePreset(BaseModel):
    """A named grid of (n, p) sizes sharing lambda and test-point count"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    lam: float = Field(alias="lambda", gt=0.0)
    sizes: List[Tuple[int, int]]
    tests: int = Field(default=100, ge=1)
    seed: int = 0
    ridge_convention: RidgeConvention = RidgeConvention.HALF
    reported: Dict[str, Dict[str, float]] = {}
