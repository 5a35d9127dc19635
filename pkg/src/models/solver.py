"""
Solver configuration and fit result models
"""
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config.settings import DEFAULT_MAX_ITER, MAX_HALVINGS


class SolverConfig(BaseModel):
    """Newton solver settings; tol=None means 1e-10 * max(1, initial grad norm)"""
    model_config = ConfigDict(frozen=True)

    tol: Optional[float] = Field(default=None, gt=0.0)
    max_iter: int = Field(default=DEFAULT_MAX_ITER, ge=1)
    damping: bool = True
    max_halvings: int = Field(default=MAX_HALVINGS, ge=0)


class FitResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    beta: np.ndarray
    grad_norm: float
    iterations: int = Field(ge=0)
    objective_value: float
    converged: bool
    tol: float
    objective_trace: List[float] = []
