"""
Numerical services: objective, solver, influence measures and experiments
"""
from .glm_core import loss_eval, loss_terms, reg_eval, objective_eval, objective_value
from .solver import newton_fit, loo_refit, loo_refits
from .influence import (
    HessianFactor, InfluenceModel, factorize_hessian,
    hat_diagonal, classical_if, corrected_if, newton_loo_beta, woodbury_downdate,
    newfluence, true_influence, true_influence_matrix, build_records,
    through_origin_slope, error_summary
)
from .experiment import (
    generate_synthetic, kendall_tau, effective_df, build_objective,
    fit_synthetic, compute_records, run_experiment, run_table
)
from .preset_loader import load_presets, load_preset
from .results_writer import write_results, write_fit_summary, read_records, read_rows
from .run_callbacks import RunCallbackHandler, LoggingCallbackHandler

__all__ = [
    # Objective
    "loss_eval", "loss_terms", "reg_eval", "objective_eval", "objective_value",
    # Solver
    "newton_fit", "loo_refit", "loo_refits",
    # Influence
    "HessianFactor", "InfluenceModel", "factorize_hessian",
    "hat_diagonal", "classical_if", "corrected_if", "newton_loo_beta", "woodbury_downdate",
    "newfluence", "true_influence", "true_influence_matrix", "build_records",
    "through_origin_slope", "error_summary",
    # Experiment
    "generate_synthetic", "kendall_tau", "effective_df", "build_objective",
    "fit_synthetic", "compute_records", "run_experiment", "run_table",
    # Presets and results
    "load_presets", "load_preset",
    "write_results", "write_fit_summary", "read_records", "read_rows",
    # Callbacks
    "RunCallbackHandler", "LoggingCallbackHandler"
]
