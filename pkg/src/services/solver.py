"""
Newton's method for the R-ERM objective and exact leave-one-out refits
"""
import logging
from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.config.settings import DEFAULT_TOL
from src.errors import ConvergenceError, InvalidArgumentError, SingularHessianError
from src.models.glm import ObjectiveSpec
from src.models.solver import FitResult, SolverConfig
from src.services.glm_core import objective_eval, objective_value

logger = logging.getLogger(__name__)

# Decrements below this fraction of |f| cannot show up as a strict decrease
_DECREMENT_RESOLUTION = 1e-15


def _newton_direction(hessian: np.ndarray, grad: np.ndarray) -> np.ndarray:
    try:
        factor = cho_factor(hessian, lower=True, check_finite=False)
    except LinAlgError as e:
        raise SingularHessianError(f"Hessian is not numerically positive definite: {e}")
    return cho_solve(factor, grad, check_finite=False)


def _newton(
    spec: ObjectiveSpec,
    init,
    config: SolverConfig,
    leave_out: Optional[int] = None
) -> FitResult:
    if not spec.lam > 0:
        raise InvalidArgumentError(f"Newton fits need lambda > 0, got {spec.lam}")

    beta = np.array(init, dtype=float, copy=True)
    value, grad, hessian = objective_eval(spec, beta, leave_out)
    grad_norm = float(np.linalg.norm(grad))
    tol = config.tol if config.tol is not None else DEFAULT_TOL * max(1.0, grad_norm)
    trace = [value]

    iterations = 0
    while grad_norm > tol and iterations < config.max_iter:
        step = _newton_direction(hessian, grad)
        decrement = float(grad @ step)
        candidate = beta - step

        if config.damping and decrement > _DECREMENT_RESOLUTION * max(1.0, abs(value)):
            candidate_value = objective_value(spec, candidate, leave_out)
            halvings = 0
            # not (a < b) also rejects nan
            while not candidate_value < value and halvings < config.max_halvings:
                halvings += 1
                candidate = beta - step / 2.0 ** halvings
                candidate_value = objective_value(spec, candidate, leave_out)

            if not candidate_value < value:
                logger.warning(
                    f"⚠️ Line search stalled after {halvings} halvings "
                    f"(iteration {iterations}, grad_norm={grad_norm:.3e})"
                )
                break
            if halvings:
                logger.debug(f"Step halved {halvings} times at iteration {iterations}")

        beta = candidate
        iterations += 1
        value, grad, hessian = objective_eval(spec, beta, leave_out)
        grad_norm = float(np.linalg.norm(grad))
        trace.append(value)
        logger.debug(f"Newton iteration {iterations}: objective={value:.12g}, grad_norm={grad_norm:.3e}")

    converged = grad_norm <= tol
    if not converged:
        logger.warning(f"⚠️ Newton stopped after {iterations} iterations with grad_norm={grad_norm:.3e} > tol={tol:.3e}")

    return FitResult(
        beta=beta,
        grad_norm=grad_norm,
        iterations=iterations,
        objective_value=value,
        converged=converged,
        tol=tol,
        objective_trace=trace
    )


def newton_fit(spec: ObjectiveSpec, init, config: Optional[SolverConfig] = None) -> FitResult:
    """Minimize L_n by damped Newton iterations from init"""
    config = config or SolverConfig()
    init = np.asarray(init, dtype=float)
    if init.shape != (spec.dataset.p,) or not np.all(np.isfinite(init)):
        raise InvalidArgumentError(f"init must be a finite vector of length {spec.dataset.p}")
    return _newton(spec, init, config)


def loo_refit(
    spec: ObjectiveSpec,
    leave_out_index: int,
    warm_start,
    config: Optional[SolverConfig] = None
) -> FitResult:
    """Exact minimizer of L_{n,/i}, started from warm_start (normally beta_hat)"""
    config = config or SolverConfig()
    if not 0 <= leave_out_index < spec.dataset.n:
        raise InvalidArgumentError(f"leave_out_index {leave_out_index} outside [0, {spec.dataset.n})")
    warm_start = np.asarray(warm_start, dtype=float)
    if warm_start.shape != (spec.dataset.p,) or not np.all(np.isfinite(warm_start)):
        raise InvalidArgumentError(f"warm_start must be a finite vector of length {spec.dataset.p}")
    return _newton(spec, warm_start, config, leave_out=leave_out_index)


def loo_refits(
    spec: ObjectiveSpec,
    beta_hat,
    config: Optional[SolverConfig] = None,
    n_jobs: int = 1,
    on_refit=None,
    strict: bool = False
) -> np.ndarray:
    """
    All n leave-one-out refits warm-started at beta_hat

    Args:
        strict: Raise ConvergenceError if any refit misses its tolerance

    Returns:
        p x n matrix whose column i is beta_hat_{/i}
    """
    config = config or SolverConfig()
    n = spec.dataset.n
    logger.info(f"🔁 Running {n} leave-one-out refits on {n_jobs} thread(s)")

    fits = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(loo_refit)(spec, i, beta_hat, config) for i in range(n)
    )

    unconverged = [i for i, fit in enumerate(fits) if not fit.converged]
    if unconverged:
        logger.warning(f"⚠️ {len(unconverged)} refits did not converge (first: {unconverged[:5]})")
    if on_refit is not None:
        for i, fit in enumerate(fits):
            on_refit(i, fit)
    if strict and unconverged:
        raise ConvergenceError(
            f"{len(unconverged)} of {n} leave-one-out refits did not converge: indices {unconverged[:10]}"
        )

    return np.column_stack([fit.beta for fit in fits])
