"""
Losses, regularizers and the regularized ERM objective with its derivatives
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from src.errors import DomainError, InvalidArgumentError
from src.models.glm import (
    LossKind, LossModel, ObjectiveSpec, RegularizerKind, RegularizerModel, RidgeConvention
)

logger = logging.getLogger(__name__)


# ============================================================================
# Losses
# ============================================================================

def loss_terms(loss: LossModel, y: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (l, dl/du, d2l/du2); inputs are trusted"""
    if loss.kind == LossKind.SQUARED:
        residual = u - y
        return 0.5 * residual ** 2, residual, np.ones_like(residual)

    # log(1 + e^u) - y*u; logaddexp branches on the sign of u so |u| > 30 cannot overflow
    prob = expit(u)
    value = np.logaddexp(0.0, u) - y * u
    return value, prob - y, prob * (1.0 - prob)


def loss_eval(loss: LossModel, y: float, u: float) -> Tuple[float, float, float]:
    """Return (l(y,u), l'(y,u), l''(y,u)) for one observation"""
    if not (math.isfinite(y) and math.isfinite(u)):
        raise InvalidArgumentError(f"loss_eval needs finite inputs, got y={y}, u={u}")
    if loss.kind == LossKind.LOGISTIC and y not in (0.0, 1.0):
        raise DomainError(f"Logistic loss needs y in {{0, 1}}, got {y}")

    value, d1, d2 = loss_terms(loss, np.asarray(float(y)), np.asarray(float(u)))
    return float(value), float(d1), float(d2)


# ============================================================================
# Regularizers
# ============================================================================

def _penalty_terms(reg: RegularizerModel, beta: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    if reg.kind == RegularizerKind.RIDGE:
        scale = 1.0 if reg.convention == RidgeConvention.PAPER else 0.5
        return (
            scale * float(beta @ beta),
            2.0 * scale * beta,
            np.full(beta.shape, 2.0 * scale),
        )

    value = float(np.sum(reg.value_fn(beta)))
    grad = np.asarray(reg.grad_fn(beta), dtype=float)
    hess_diag = np.asarray(reg.hess_fn(beta), dtype=float)
    return value, grad, hess_diag


def reg_eval(reg: RegularizerModel, beta) -> Tuple[float, np.ndarray, np.ndarray]:
    """Return (r(beta), per-coordinate r', per-coordinate r'')"""
    beta = np.asarray(beta, dtype=float)
    if beta.ndim != 1 or not np.all(np.isfinite(beta)):
        raise InvalidArgumentError("reg_eval needs a finite coefficient vector")

    value, grad, hess_diag = _penalty_terms(reg, beta)
    if grad.shape != beta.shape or hess_diag.shape != beta.shape:
        raise InvalidArgumentError(
            f"Regularizer derivatives have shapes {grad.shape}/{hess_diag.shape}, expected {beta.shape}"
        )

    nu = reg.strong_convexity()
    if np.any(hess_diag < nu):
        k = int(np.argmin(hess_diag))
        raise DomainError(f"Regularizer curvature {hess_diag[k]} at coordinate {k} is below nu={nu}")
    return value, grad, hess_diag


# ============================================================================
# Objective
# ============================================================================

def _check_beta(spec: ObjectiveSpec, beta) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (spec.dataset.p,):
        raise InvalidArgumentError(f"beta has shape {beta.shape}, expected ({spec.dataset.p},)")
    if not np.all(np.isfinite(beta)):
        raise InvalidArgumentError("beta contains non-finite entries")
    return beta


def _sample_weights(n: int, leave_out: Optional[int]) -> np.ndarray:
    weights = np.ones(n)
    if leave_out is not None:
        if not 0 <= leave_out < n:
            raise InvalidArgumentError(f"leave_out index {leave_out} outside [0, {n})")
        weights[leave_out] = 0.0
    return weights


def objective_value(spec: ObjectiveSpec, beta, leave_out: Optional[int] = None) -> float:
    """L_n(beta), or L_{n,/i}(beta) when leave_out=i"""
    beta = _check_beta(spec, beta)
    X, y = spec.dataset.features, spec.dataset.responses
    weights = _sample_weights(spec.dataset.n, leave_out)

    values, _, _ = loss_terms(spec.loss, y, X @ beta)
    penalty, _, _ = _penalty_terms(spec.regularizer, beta)
    return float(weights @ values) + spec.lam * penalty


def objective_eval(
    spec: ObjectiveSpec,
    beta,
    leave_out: Optional[int] = None
) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Value, gradient and dense Hessian G(beta) of the R-ERM objective

    With leave_out=i the i-th sample is dropped, giving L_{n,/i} and G_{/i}.
    """
    beta = _check_beta(spec, beta)
    X, y = spec.dataset.features, spec.dataset.responses
    weights = _sample_weights(spec.dataset.n, leave_out)

    values, d1, d2 = loss_terms(spec.loss, y, X @ beta)
    penalty, pen_grad, pen_hess = reg_eval(spec.regularizer, beta)

    value = float(weights @ values) + spec.lam * penalty
    grad = X.T @ (weights * d1) + spec.lam * pen_grad
    hessian = X.T @ ((weights * d2)[:, None] * X)
    hessian = 0.5 * (hessian + hessian.T)
    hessian[np.diag_indices_from(hessian)] += spec.lam * pen_hess
    return value, grad, hessian
