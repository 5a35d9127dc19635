"""
Data models for regularized GLM objectives
"""
from enum import Enum
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class LossKind(str, Enum):
    SQUARED = "squared"
    LOGISTIC = "logistic"


class RegularizerKind(str, Enum):
    RIDGE = "ridge"
    CUSTOM = "custom"


class RidgeConvention(str, Enum):
    PAPER = "paper"  # r = sum(beta^2)
    HALF = "half"    # r = 0.5 * sum(beta^2)


def _frozen_array(value, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite entries")
    array.flags.writeable = False
    return array


class Dataset(BaseModel):
    """Feature matrix (row i = x_i) with its response vector"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: np.ndarray
    responses: np.ndarray

    @field_validator("features", mode="before")
    @classmethod
    def _check_features(cls, value):
        return _frozen_array(value, 2, "features")

    @field_validator("responses", mode="before")
    @classmethod
    def _check_responses(cls, value):
        return _frozen_array(value, 1, "responses")

    @model_validator(mode="after")
    def _check_shapes(self):
        n, p = self.features.shape
        if n < 1 or p < 1:
            raise ValueError(f"Dataset needs n >= 1 and p >= 1, got n={n}, p={p}")
        if self.responses.shape[0] != n:
            raise ValueError(f"responses has length {self.responses.shape[0]}, expected {n}")
        return self

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]


class LossModel(BaseModel):
    """Smooth per-sample loss l(y, u) of the linear predictor u"""
    model_config = ConfigDict(frozen=True)

    kind: LossKind = LossKind.LOGISTIC


class RegularizerModel(BaseModel):
    """
    Separable, strongly convex penalty r(beta) = sum_k r_k(beta_k)

    Custom penalties supply vectorized per-coordinate value, first and
    second derivative maps together with their strong-convexity constant.
    """
    model_config = ConfigDict(frozen=True)

    kind: RegularizerKind = RegularizerKind.RIDGE
    convention: RidgeConvention = RidgeConvention.PAPER
    value_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    grad_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    nu: Optional[float] = None

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == RegularizerKind.CUSTOM:
            if self.value_fn is None or self.grad_fn is None or self.hess_fn is None:
                raise ValueError("Custom regularizer needs value_fn, grad_fn and hess_fn")
            if self.nu is None or not self.nu > 0:
                raise ValueError(f"Custom regularizer needs nu > 0, got {self.nu}")
        return self

    @classmethod
    def ridge(cls, convention: RidgeConvention = RidgeConvention.PAPER) -> "RegularizerModel":
        return cls(kind=RegularizerKind.RIDGE, convention=convention)

    @classmethod
    def custom(cls, value_fn, grad_fn, hess_fn, nu: float) -> "RegularizerModel":
        return cls(kind=RegularizerKind.CUSTOM, value_fn=value_fn,
                   grad_fn=grad_fn, hess_fn=hess_fn, nu=nu)

    def strong_convexity(self) -> float:
        """Lower bound on every per-coordinate second derivative"""
        if self.kind == RegularizerKind.RIDGE:
            return 2.0 if self.convention == RidgeConvention.PAPER else 1.0
        return float(self.nu)


class ObjectiveSpec(BaseModel):
    """L_n(beta) = sum_j l(y_j, x_j^T beta) + lam * r(beta)"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    dataset: Dataset
    loss: LossModel = Field(default_factory=LossModel)
    regularizer: RegularizerModel = Field(default_factory=RegularizerModel)
    lam: float = Field(alias="lambda", ge=0.0)

    @model_validator(mode="after")
    def _check_responses(self):
        if self.loss.kind == LossKind.LOGISTIC:
            responses = self.dataset.responses
            if not np.all((responses == 0.0) | (responses == 1.0)):
                raise ValueError("Logistic loss requires every response to be 0 or 1")
        return self
