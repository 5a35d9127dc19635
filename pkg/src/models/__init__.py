"""
Data models and schemas
"""
from .glm import (
    LossKind, RegularizerKind, RidgeConvention,
    Dataset, LossModel, RegularizerModel, ObjectiveSpec
)
from .solver import SolverConfig, FitResult
from .influence import HatDiagnostics, InfluenceRecord
from .experiment import (
    Estimator, ALL_ESTIMATORS, ExperimentConfig, SyntheticInstance, TableRow,
    ExperimentResult, FitSummary, ErrorSummary, TablePreset
)
from .cli import Subcommand, OutputFormat, CliInvocation

__all__ = [
    # GLM objective
    "LossKind", "RegularizerKind", "RidgeConvention",
    "Dataset", "LossModel", "RegularizerModel", "ObjectiveSpec",
    # Solver
    "SolverConfig", "FitResult",
    # Influence
    "HatDiagnostics", "InfluenceRecord",
    # Experiment
    "Estimator", "ALL_ESTIMATORS", "ExperimentConfig", "SyntheticInstance", "TableRow",
    "ExperimentResult", "FitSummary", "ErrorSummary", "TablePreset",
    # CLI
    "Subcommand", "OutputFormat", "CliInvocation"
]
