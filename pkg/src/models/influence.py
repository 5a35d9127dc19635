"""
Leverage diagnostics and influence record models
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict


class HatDiagnostics(BaseModel):
    """Diagonal of H = X G^-1 X^T diag(l''), its trace df and df/p"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h: np.ndarray
    df: float
    df_ratio: float


class InfluenceRecord(BaseModel):
    """All influence measures of training point train_index on test point test_index"""
    model_config = ConfigDict(frozen=True)

    train_index: int
    test_index: int
    h_ii: float
    i_true: Optional[float] = None
    i_if: float
    i_if_corrected: float
    i_new: float
