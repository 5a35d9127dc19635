"""
Experiment callback handlers for progress tracking
"""
import logging
import time
from typing import Dict, Optional

from src.models.solver import FitResult

logger = logging.getLogger(__name__)


class RunCallbackHandler:
    """No-op base; subclasses override the hooks they care about"""

    def on_phase_start(self, phase: str, **details) -> None:
        pass

    def on_phase_end(self, phase: str, **details) -> None:
        pass

    def on_fit_end(self, fit: FitResult) -> None:
        pass

    def on_refit_end(self, index: int, fit: FitResult) -> None:
        pass


class LoggingCallbackHandler(RunCallbackHandler):
    """Logs phase boundaries with wall-clock timings and collects refit statistics"""

    def __init__(self, label: str = "run"):
        self.label = label
        self.active_phases: Dict[str, float] = {}
        self.phase_seconds: Dict[str, float] = {}
        self.refit_iterations = 0
        self.refit_count = 0
        self.slowest_refit: Optional[int] = None
        self._slowest_iterations = -1

    def on_phase_start(self, phase: str, **details) -> None:
        self.active_phases[phase] = time.perf_counter()
        suffix = f" {details}" if details else ""
        logger.info(f"🚀 [{self.label}] {phase} started{suffix}")

    def on_phase_end(self, phase: str, **details) -> None:
        started = self.active_phases.pop(phase, None)
        elapsed = time.perf_counter() - started if started is not None else float("nan")
        self.phase_seconds[phase] = self.phase_seconds.get(phase, 0.0) + elapsed
        suffix = f" {details}" if details else ""
        logger.info(f"✅ [{self.label}] {phase} done in {elapsed:.2f}s{suffix}")

    def on_fit_end(self, fit: FitResult) -> None:
        logger.info(
            f"📈 [{self.label}] fit: {fit.iterations} Newton iterations, "
            f"objective={fit.objective_value:.10g}, grad_norm={fit.grad_norm:.3e}"
        )

    def on_refit_end(self, index: int, fit: FitResult) -> None:
        self.refit_count += 1
        self.refit_iterations += fit.iterations
        if fit.iterations > self._slowest_iterations:
            self._slowest_iterations = fit.iterations
            self.slowest_refit = index
        if not fit.converged:
            logger.error(f"❌ [{self.label}] refit {index} did not converge (grad_norm={fit.grad_norm:.3e})")

    @property
    def mean_refit_iterations(self) -> float:
        return self.refit_iterations / self.refit_count if self.refit_count else 0.0
