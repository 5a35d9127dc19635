"""
Synthetic logistic-ridge experiments

Generates data from the Bernoulli model, fits by Newton, compares every
approximate influence measure with exact leave-one-out refits through
per-test-point Kendall tau, and reports effective degrees of freedom.
"""
import logging
import zlib
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit, ndtri

from src.errors import ConvergenceError, InvalidArgumentError
from src.models.experiment import (
    Estimator, ExperimentConfig, ExperimentResult, FitSummary, SyntheticInstance,
    TablePreset, TableRow
)
from src.models.glm import Dataset, LossKind, LossModel, ObjectiveSpec, RegularizerModel
from src.models.influence import HatDiagnostics, InfluenceRecord
from src.models.solver import FitResult, SolverConfig
from src.services.influence import InfluenceModel, build_records, true_influence_matrix
from src.services.run_callbacks import RunCallbackHandler
from src.services.solver import newton_fit

logger = logging.getLogger(__name__)

# Uniform draws are k * 2^-53; this offset keeps them strictly inside (0, 1)
_UNIFORM_OFFSET = 2.0 ** -54


# ============================================================================
# Data generation
# ============================================================================

def _substream(seed: int, replicate: int, label: str) -> np.random.Generator:
    """Counter-based generator for one named substream"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(replicate, zlib.crc32(label.encode())))
    return np.random.Generator(np.random.Philox(sequence))


def _standard_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normals by inverse-CDF transform of uniforms"""
    return ndtri(rng.random(size) + _UNIFORM_OFFSET)


def _bernoulli(rng: np.random.Generator, prob: np.ndarray) -> np.ndarray:
    return (rng.random(prob.shape) < prob).astype(float)


def generate_synthetic(config: ExperimentConfig, replicate: int = 0) -> SyntheticInstance:
    """
    Draw beta* ~ N(0, I_p), x ~ N(0, I_p / n) and y ~ Bernoulli(sigmoid(x^T beta*))

    For squared loss the responses are x^T beta* plus standard normal noise.
    """
    n, p, m = config.n, config.p, config.m
    scale = 1.0 / np.sqrt(n)

    def stream(label: str) -> np.random.Generator:
        return _substream(config.seed, replicate, label)

    beta_star = _standard_normal(stream("beta_star"), p)
    train_x = scale * _standard_normal(stream("train_x"), (n, p))
    test_x = scale * _standard_normal(stream("test_x"), (m, p))

    if config.loss == LossKind.LOGISTIC:
        train_y = _bernoulli(stream("train_y"), expit(train_x @ beta_star))
        test_y = _bernoulli(stream("test_y"), expit(test_x @ beta_star))
    else:
        train_y = train_x @ beta_star + _standard_normal(stream("train_y"), n)
        test_y = test_x @ beta_star + _standard_normal(stream("test_y"), m)

    return SyntheticInstance(
        train=Dataset(features=train_x, responses=train_y),
        test=Dataset(features=test_x, responses=test_y),
        beta_star=beta_star
    )


# ============================================================================
# Metrics
# ============================================================================

def kendall_tau(a, b) -> float:
    """
    Kendall tau-a: (concordant - discordant) / (n (n - 1) / 2)

    Tied pairs count as neither concordant nor discordant.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape:
        raise InvalidArgumentError(f"kendall_tau needs equal-length vectors, got {a.shape} and {b.shape}")
    n = a.shape[0]
    if n < 2:
        raise InvalidArgumentError(f"kendall_tau needs at least 2 values, got {n}")

    # every unordered pair appears twice in the full sign matrix
    signs = np.sign(a[:, None] - a[None, :]) * np.sign(b[:, None] - b[None, :])
    return float(signs.sum()) / (n * (n - 1))


def effective_df(diag: HatDiagnostics, p: int) -> Tuple[float, float]:
    """df = sum_i H_ii and df / p"""
    df = float(np.sum(diag.h))
    return df, df / p


def _tau_per_test(estimate: np.ndarray, truth: np.ndarray) -> np.ndarray:
    return np.array([kendall_tau(estimate[:, j], truth[:, j]) for j in range(truth.shape[1])])


# ============================================================================
# Runs
# ============================================================================

def build_objective(config: ExperimentConfig, train: Dataset) -> ObjectiveSpec:
    return ObjectiveSpec(
        dataset=train,
        loss=LossModel(kind=config.loss),
        regularizer=RegularizerModel.ridge(config.ridge_convention),
        lam=config.lam
    )


def _fit(spec: ObjectiveSpec, callbacks: RunCallbackHandler) -> FitResult:
    callbacks.on_phase_start("fit", n=spec.dataset.n, p=spec.dataset.p, lam=spec.lam)
    fit = newton_fit(spec, np.zeros(spec.dataset.p), SolverConfig())
    callbacks.on_fit_end(fit)
    callbacks.on_phase_end("fit", iterations=fit.iterations)
    if not fit.converged:
        raise ConvergenceError(
            f"Full-data fit did not converge: grad_norm={fit.grad_norm:.3e} after {fit.iterations} iterations"
        )
    return fit


def fit_synthetic(config: ExperimentConfig, callbacks: Optional[RunCallbackHandler] = None) -> FitSummary:
    """Generate one instance, fit it and report leverage diagnostics"""
    callbacks = callbacks or RunCallbackHandler()
    instance = generate_synthetic(config)
    spec = build_objective(config, instance.train)
    fit = _fit(spec, callbacks)
    hat = InfluenceModel(spec, fit.beta).hat
    df, df_ratio = effective_df(hat, config.p)

    return FitSummary(
        n=config.n, p=config.p, lam=config.lam,
        objective_value=fit.objective_value,
        grad_norm=fit.grad_norm,
        iterations=fit.iterations,
        converged=fit.converged,
        df=df,
        df_ratio=df_ratio
    )


def _run_replicate(
    config: ExperimentConfig,
    replicate: int,
    n_jobs: int,
    callbacks: RunCallbackHandler
) -> Tuple[HatDiagnostics, Dict[str, np.ndarray]]:
    callbacks.on_phase_start("generate", replicate=replicate)
    instance = generate_synthetic(config, replicate)
    callbacks.on_phase_end("generate")

    spec = build_objective(config, instance.train)
    fit = _fit(spec, callbacks)

    callbacks.on_phase_start("approximate influence")
    model = InfluenceModel(spec, fit.beta)
    matrices = {
        "if": model.classical_if_matrix(instance.test),
        "corrected": model.corrected_if_matrix(instance.test),
        "new": model.newfluence_matrix(instance.test),
    }
    callbacks.on_phase_end("approximate influence", df_ratio=round(model.hat.df_ratio, 4))

    if Estimator.TRUE in config.estimators:
        callbacks.on_phase_start("exact refits")
        matrices["true"] = true_influence_matrix(
            spec, fit.beta, instance.test, SolverConfig(), n_jobs=n_jobs,
            on_refit=callbacks.on_refit_end
        )
        callbacks.on_phase_end("exact refits")

    return model.hat, matrices


def compute_records(
    config: ExperimentConfig,
    n_jobs: int = 1,
    callbacks: Optional[RunCallbackHandler] = None
) -> Tuple[HatDiagnostics, List[InfluenceRecord]]:
    """Influence records of one replicate; i_true only when requested"""
    callbacks = callbacks or RunCallbackHandler()
    hat, matrices = _run_replicate(config, 0, n_jobs, callbacks)
    return hat, build_records(hat, matrices["if"], matrices["new"], matrices.get("true"))


def _summary(values: List[np.ndarray]) -> Tuple[float, float]:
    pooled = np.concatenate(values)
    return float(np.mean(pooled)), float(np.std(pooled))


def run_experiment(
    config: ExperimentConfig,
    n_jobs: int = 1,
    callbacks: Optional[RunCallbackHandler] = None
) -> ExperimentResult:
    """
    Fit, compute every (train, test) influence and summarize Kendall tau

    Tau is computed per test point across training points and summarized by
    mean and std over test points (pooled over replicates). Records come
    from replicate 0.
    """
    if Estimator.TRUE not in config.estimators:
        raise InvalidArgumentError("Kendall tau needs the 'true' estimator")
    callbacks = callbacks or RunCallbackHandler()

    taus: Dict[Estimator, List[np.ndarray]] = {estimator: [] for estimator in config.estimators}
    df_ratios = []
    records: List[InfluenceRecord] = []

    for replicate in range(config.replicates):
        hat, matrices = _run_replicate(config, replicate, n_jobs, callbacks)
        df_ratios.append(hat.df_ratio)
        truth = matrices["true"]

        callbacks.on_phase_start("kendall tau", replicate=replicate)
        if Estimator.NEW in config.estimators:
            taus[Estimator.NEW].append(_tau_per_test(matrices["new"], truth))
        if Estimator.IF in config.estimators:
            taus[Estimator.IF].append(_tau_per_test(matrices["if"], truth))
        if Estimator.CORRECTED_IF in config.estimators:
            taus[Estimator.CORRECTED_IF].append(_tau_per_test(matrices["corrected"], truth))
        callbacks.on_phase_end("kendall tau")

        if replicate == 0:
            records = build_records(hat, matrices["if"], matrices["new"], truth)

    columns = {}
    for estimator, prefix in ((Estimator.NEW, "tau_new"), (Estimator.IF, "tau_if"),
                              (Estimator.CORRECTED_IF, "tau_corrected")):
        if taus.get(estimator):
            columns[f"{prefix}_mean"], columns[f"{prefix}_std"] = _summary(taus[estimator])

    row = TableRow(n=config.n, p=config.p, lam=config.lam, df_ratio=float(np.mean(df_ratios)), **columns)
    logger.info(f"📊 n={config.n} p={config.p} lambda={config.lam}: {row.model_dump(exclude_none=True)}")
    return ExperimentResult(rows=[row], records=records)


def run_table(
    preset: TablePreset,
    n_jobs: int = 1,
    max_n: Optional[int] = None,
    tests: Optional[int] = None,
    seed: Optional[int] = None,
    replicates: int = 1,
    callbacks: Optional[RunCallbackHandler] = None
) -> List[TableRow]:
    """One TableRow per (n, p) size of a preset, skipping n > max_n"""
    rows = []
    for n, p in preset.sizes:
        if max_n is not None and n > max_n:
            logger.info(f"ℹ️ Skipping {preset.name} row n={n}, p={p} (max_n={max_n})")
            continue
        config = ExperimentConfig(
            n=n, p=p, lam=preset.lam,
            m=tests if tests is not None else preset.tests,
            seed=seed if seed is not None else preset.seed,
            ridge_convention=preset.ridge_convention,
            replicates=replicates
        )
        rows.extend(run_experiment(config, n_jobs=n_jobs, callbacks=callbacks).rows)
    return rows
