"""
Shared fixtures: small random objectives with fixed seeds
"""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.models import Dataset, LossKind, LossModel, ObjectiveSpec, RegularizerModel, RidgeConvention


def make_spec(
    n: int,
    p: int,
    lam: float,
    loss: LossKind = LossKind.LOGISTIC,
    seed: int = 0,
    convention: RidgeConvention = RidgeConvention.PAPER
) -> ObjectiveSpec:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p)) / np.sqrt(n)
    beta_star = rng.standard_normal(p)
    if loss == LossKind.LOGISTIC:
        y = (rng.random(n) < 1.0 / (1.0 + np.exp(-X @ beta_star))).astype(float)
    else:
        y = X @ beta_star + rng.standard_normal(n)
    return ObjectiveSpec(
        dataset=Dataset(features=X, responses=y),
        loss=LossModel(kind=loss),
        regularizer=RegularizerModel.ridge(convention),
        lam=lam
    )


def make_test_set(p: int, m: int, loss: LossKind = LossKind.LOGISTIC, seed: int = 1, scale_n: int = 30) -> Dataset:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((m, p)) / np.sqrt(scale_n)
    if loss == LossKind.LOGISTIC:
        y = rng.integers(0, 2, m).astype(float)
    else:
        y = rng.standard_normal(m)
    return Dataset(features=X, responses=y)


@pytest.fixture
def logistic_spec():
    return make_spec(30, 8, 1.0, LossKind.LOGISTIC, seed=3)


@pytest.fixture
def squared_spec():
    return make_spec(25, 6, 0.5, LossKind.SQUARED, seed=4)
