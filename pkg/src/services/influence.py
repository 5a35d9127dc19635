"""
Influence measures for regularized GLMs

True leave-one-out influence, the classical influence function, its
leverage-corrected variant and Newfluence (a single Newton step towards
the leave-one-out fit). Every approximate measure reuses one Cholesky
factorization of the full-data Hessian G(beta_hat).
"""
import logging
from functools import cached_property
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.sparse.linalg import LinearOperator

from src.config.settings import LEVERAGE_EPS
from src.errors import ConvergenceError, DegenerateLeverageError, InvalidArgumentError, SingularHessianError
from src.models.experiment import ErrorSummary
from src.models.glm import Dataset, ObjectiveSpec
from src.models.influence import HatDiagnostics, InfluenceRecord
from src.models.solver import SolverConfig
from src.services.glm_core import loss_eval, loss_terms, objective_eval
from src.services.solver import loo_refit, loo_refits

logger = logging.getLogger(__name__)

TestPoint = Tuple[float, np.ndarray]


class HessianFactor:
    """Cholesky factorization of a symmetric positive-definite Hessian"""

    def __init__(self, matrix: np.ndarray):
        matrix = np.array(matrix, dtype=float, copy=True)
        matrix.flags.writeable = False
        self.matrix = matrix
        try:
            self._factor = cho_factor(matrix, lower=True, check_finite=False)
        except LinAlgError as e:
            raise SingularHessianError(f"Hessian is not numerically positive definite: {e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """G^-1 rhs for a vector or a matrix of right-hand sides"""
        return cho_solve(self._factor, rhs, check_finite=False)


def factorize_hessian(spec: ObjectiveSpec, beta) -> HessianFactor:
    _, _, hessian = objective_eval(spec, beta)
    return HessianFactor(hessian)


def _check_index(spec: ObjectiveSpec, i: int) -> None:
    if not 0 <= i < spec.dataset.n:
        raise InvalidArgumentError(f"Training index {i} outside [0, {spec.dataset.n})")


def _check_test_point(spec: ObjectiveSpec, z0: TestPoint) -> Tuple[float, np.ndarray]:
    y0, x0 = z0
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (spec.dataset.p,):
        raise InvalidArgumentError(f"Test features have shape {x0.shape}, expected ({spec.dataset.p},)")
    return float(y0), x0


def _point_terms(spec: ObjectiveSpec, beta_hat, i: int) -> Tuple[np.ndarray, float, float]:
    x_i = spec.dataset.features[i]
    _, d1, d2 = loss_eval(spec.loss, spec.dataset.responses[i], float(x_i @ beta_hat))
    return x_i, d1, d2


def _leverage(ginv_x: np.ndarray, x_i: np.ndarray, d2: float) -> float:
    return float(x_i @ ginv_x) * d2


# ============================================================================
# Leverage
# ============================================================================

def hat_diagonal(spec: ObjectiveSpec, beta_hat, g_factorization: HessianFactor) -> HatDiagnostics:
    """H_ii = (x_i^T G^-1 x_i) l''_i(beta_hat) for every training point"""
    X = spec.dataset.features
    _, _, d2 = loss_terms(spec.loss, spec.dataset.responses, X @ np.asarray(beta_hat, dtype=float))
    ginv_xt = g_factorization.solve(X.T)
    return _diagnostics(np.einsum("ij,ji->i", X, ginv_xt) * d2, spec.dataset.p)


def _diagnostics(h: np.ndarray, p: int) -> HatDiagnostics:
    degenerate = np.flatnonzero(h >= 1.0 - LEVERAGE_EPS)
    if degenerate.size:
        i = int(degenerate[0])
        raise DegenerateLeverageError(
            f"Leverage H_ii={h[i]:.15g} at training point {i} is numerically 1; lambda is too small",
            index=i
        )
    h = h.copy()
    h.flags.writeable = False
    df = float(h.sum())
    return HatDiagnostics(h=h, df=df, df_ratio=df / p)


def corrected_if(i_if: float, h_ii: float) -> float:
    """Leverage-corrected influence I^IF / (1 - H_ii)"""
    if h_ii >= 1.0:
        raise DegenerateLeverageError(f"corrected_if needs h_ii < 1, got {h_ii}")
    return i_if / (1.0 - h_ii)


# ============================================================================
# Single-pair influence measures
# ============================================================================

def classical_if(spec: ObjectiveSpec, beta_hat, g_factorization: HessianFactor, i: int, z0: TestPoint) -> float:
    """I^IF = l'_0(beta_hat) x_0^T G^-1 x_i l'_i(beta_hat)"""
    _check_index(spec, i)
    y0, x0 = _check_test_point(spec, z0)
    beta_hat = np.asarray(beta_hat, dtype=float)

    x_i, d1_i, _ = _point_terms(spec, beta_hat, i)
    _, d1_0, _ = loss_eval(spec.loss, y0, float(x0 @ beta_hat))
    return d1_0 * float(x0 @ g_factorization.solve(x_i)) * d1_i


def woodbury_downdate(g_inv_action: HessianFactor, x_i, d_i: float) -> LinearOperator:
    """
    Operator for (G - d_i x_i x_i^T)^-1 built from the factorization of G

    Applies v -> G^-1 v + G^-1 x_i (x_i^T G^-1 v) d_i / (1 - d_i x_i^T G^-1 x_i).
    """
    x_i = np.asarray(x_i, dtype=float)
    if x_i.shape != (g_inv_action.dim,):
        raise InvalidArgumentError(f"x_i has shape {x_i.shape}, expected ({g_inv_action.dim},)")
    if d_i < 0:
        raise InvalidArgumentError(f"Downdate weight must be nonnegative, got {d_i}")

    ginv_x = g_inv_action.solve(x_i)
    denominator = 1.0 - d_i * float(x_i @ ginv_x)
    if denominator <= LEVERAGE_EPS:
        raise DegenerateLeverageError(f"Woodbury denominator {denominator:.3e} is not positive")
    coefficient = d_i / denominator

    def matmat(V: np.ndarray) -> np.ndarray:
        ginv_v = g_inv_action.solve(V)
        return ginv_v + np.outer(ginv_x, x_i @ ginv_v) * coefficient

    def matvec(v: np.ndarray) -> np.ndarray:
        return matmat(np.reshape(v, (-1, 1))).ravel()

    p = g_inv_action.dim
    return LinearOperator((p, p), matvec=matvec, rmatvec=matvec, matmat=matmat, dtype=float)


def newton_loo_beta(spec: ObjectiveSpec, beta_hat, g_factorization: HessianFactor, i: int) -> np.ndarray:
    """One Newton step on L_{n,/i} from beta_hat: beta_hat + l'_i G^-1 x_i / (1 - H_ii)"""
    _check_index(spec, i)
    beta_hat = np.asarray(beta_hat, dtype=float)
    x_i, d1, d2 = _point_terms(spec, beta_hat, i)
    ginv_x = g_factorization.solve(x_i)

    h_ii = _leverage(ginv_x, x_i, d2)
    if h_ii >= 1.0 - LEVERAGE_EPS:
        raise DegenerateLeverageError(f"Leverage H_ii={h_ii:.15g} at training point {i} is numerically 1", index=i)
    return beta_hat + d1 * ginv_x / (1.0 - h_ii)


def newfluence(spec: ObjectiveSpec, beta_hat, g_factorization: HessianFactor, i: int, z0: TestPoint) -> float:
    """I^New = l_0(beta_tilde_i) - l_0(beta_hat)"""
    y0, x0 = _check_test_point(spec, z0)
    beta_tilde = newton_loo_beta(spec, beta_hat, g_factorization, i)
    after, _, _ = loss_eval(spec.loss, y0, float(x0 @ beta_tilde))
    before, _, _ = loss_eval(spec.loss, y0, float(x0 @ np.asarray(beta_hat, dtype=float)))
    return after - before


def true_influence(
    spec: ObjectiveSpec,
    beta_hat,
    i: int,
    z0: TestPoint,
    solver_config: Optional[SolverConfig] = None
) -> float:
    """I^True = l_0(beta_hat_{/i}) - l_0(beta_hat) from an exact refit"""
    _check_index(spec, i)
    y0, x0 = _check_test_point(spec, z0)
    refit = loo_refit(spec, i, beta_hat, solver_config)
    if not refit.converged:
        raise ConvergenceError(
            f"Leave-one-out refit {i} did not converge: grad_norm={refit.grad_norm:.3e} > tol={refit.tol:.3e}"
        )
    after, _, _ = loss_eval(spec.loss, y0, float(x0 @ refit.beta))
    before, _, _ = loss_eval(spec.loss, y0, float(x0 @ np.asarray(beta_hat, dtype=float)))
    return after - before


# ============================================================================
# Batch computation over all (training point, test point) pairs
# ============================================================================

def _test_loss_change(spec: ObjectiveSpec, test: Dataset, base_margins: np.ndarray, new_margins: np.ndarray) -> np.ndarray:
    """Loss change per (training point, test point) given n x m shifted test margins"""
    y0 = test.responses[None, :]
    after, _, _ = loss_terms(spec.loss, y0, new_margins)
    before, _, _ = loss_terms(spec.loss, y0, base_margins[None, :])
    return after - before


class InfluenceModel:
    """
    Fitted-model state shared by every influence computation

    G(beta_hat) is factorized once and G^-1 X^T solved once; all n x m
    influence matrices are products of these cached pieces.
    """

    def __init__(self, spec: ObjectiveSpec, beta_hat, factor: Optional[HessianFactor] = None):
        self.spec = spec
        self.beta_hat = np.array(beta_hat, dtype=float, copy=True)
        self.beta_hat.flags.writeable = False
        self.factor = factor or factorize_hessian(spec, self.beta_hat)

        X = spec.dataset.features
        _, self.d1, self.d2 = loss_terms(spec.loss, spec.dataset.responses, X @ self.beta_hat)

    @cached_property
    def ginv_xt(self) -> np.ndarray:
        """p x n matrix with columns G^-1 x_i"""
        return self.factor.solve(self.spec.dataset.features.T)

    @cached_property
    def hat(self) -> HatDiagnostics:
        X = self.spec.dataset.features
        return _diagnostics(np.einsum("ij,ji->i", X, self.ginv_xt) * self.d2, self.spec.dataset.p)

    @cached_property
    def newton_steps(self) -> np.ndarray:
        """p x n matrix with columns beta_tilde_i - beta_hat"""
        return self.ginv_xt * (self.d1 / (1.0 - self.hat.h))[None, :]

    def _check_test(self, test: Dataset) -> None:
        if test.p != self.spec.dataset.p:
            raise InvalidArgumentError(f"Test set has p={test.p}, model has p={self.spec.dataset.p}")

    def classical_if_matrix(self, test: Dataset) -> np.ndarray:
        """n x m matrix of I^IF"""
        self._check_test(test)
        _, d1_0, _ = loss_terms(self.spec.loss, test.responses, test.features @ self.beta_hat)
        cross = (test.features @ self.ginv_xt).T
        return self.d1[:, None] * cross * d1_0[None, :]

    def corrected_if_matrix(self, test: Dataset) -> np.ndarray:
        return self.classical_if_matrix(test) / (1.0 - self.hat.h)[:, None]

    def newfluence_matrix(self, test: Dataset) -> np.ndarray:
        """n x m matrix of I^New"""
        self._check_test(test)
        base = test.features @ self.beta_hat
        shifted = base[None, :] + (test.features @ self.newton_steps).T
        return _test_loss_change(self.spec, test, base, shifted)


def true_influence_matrix(
    spec: ObjectiveSpec,
    beta_hat,
    test: Dataset,
    solver_config: Optional[SolverConfig] = None,
    n_jobs: int = 1,
    on_refit=None
) -> np.ndarray:
    """
    n x m matrix of I^True; one exact refit per training point, shared by all test points

    Raises ConvergenceError naming the training indices whose refit missed its tolerance.
    """
    beta_hat = np.asarray(beta_hat, dtype=float)
    loo_betas = loo_refits(spec, beta_hat, solver_config, n_jobs=n_jobs, on_refit=on_refit, strict=True)
    base = test.features @ beta_hat
    return _test_loss_change(spec, test, base, (test.features @ loo_betas).T)


def build_records(
    hat: HatDiagnostics,
    i_if: np.ndarray,
    i_new: np.ndarray,
    i_true: Optional[np.ndarray] = None
) -> List[InfluenceRecord]:
    """Flatten n x m influence matrices into records, train-major then test"""
    n, m = i_if.shape
    i_corrected = i_if / (1.0 - hat.h)[:, None]
    records = []
    for i in range(n):
        h_ii = float(hat.h[i])
        for j in range(m):
            records.append(InfluenceRecord(
                train_index=i,
                test_index=j,
                h_ii=h_ii,
                i_true=None if i_true is None else float(i_true[i, j]),
                i_if=float(i_if[i, j]),
                i_if_corrected=float(i_corrected[i, j]),
                i_new=float(i_new[i, j])
            ))
    return records


# ============================================================================
# Accuracy summaries
# ============================================================================

def through_origin_slope(x, y) -> float:
    """Least-squares slope of y on x without intercept"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size == 0:
        raise InvalidArgumentError(f"Slope needs equal non-empty shapes, got {x.shape} and {y.shape}")
    denominator = float(x @ x)
    if denominator == 0.0:
        raise InvalidArgumentError("Slope is undefined when every x is zero")
    return float(x @ y) / denominator


def error_summary(records: Iterable[InfluenceRecord]) -> ErrorSummary:
    """Median absolute errors and scatter slopes against the exact influences"""
    records = list(records)
    if not records or any(record.i_true is None for record in records):
        raise InvalidArgumentError("error_summary needs records that all carry i_true")

    i_true = np.array([record.i_true for record in records])
    i_if = np.array([record.i_if for record in records])
    i_corrected = np.array([record.i_if_corrected for record in records])
    i_new = np.array([record.i_new for record in records])
    h = np.array([record.h_ii for record in records])

    return ErrorSummary(
        median_abs_error_if=float(np.median(np.abs(i_if - i_true))),
        median_abs_error_corrected=float(np.median(np.abs(i_corrected - i_true))),
        median_abs_error_new=float(np.median(np.abs(i_new - i_true))),
        slope_new_vs_true=through_origin_slope(i_true, i_new),
        slope_if_vs_true=through_origin_slope(i_true, i_if),
        slope_if_vs_scaled_true=through_origin_slope((1.0 - h) * i_true, i_if)
    )
