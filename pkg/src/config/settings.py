"""
Application configuration and environment settings
"""
import os
from pathlib import Path
from typing import Optional

# Environment configuration
THREADS_ENV_VAR = "NEWFLUENCE_THREADS"
LOG_LEVEL = os.getenv("NEWFLUENCE_LOG_LEVEL", "INFO").upper()
PRESETS_DIR = Path(os.getenv(
    "NEWFLUENCE_PRESETS_DIR",
    str(Path(__file__).resolve().parents[2] / "presets")
))

# Newton solver defaults; the LOO oracle must resolve effects far below O(1/n)
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100
MAX_HALVINGS = 30

# Leverage at or above 1 - LEVERAGE_EPS is treated as degenerate
LEVERAGE_EPS = 1e-12


def resolve_thread_count(cli_value: Optional[int] = None) -> int:
    """
    Resolve the worker count for parallel refits

    Precedence: explicit flag, then NEWFLUENCE_THREADS, then all cores.
    """
    if cli_value is not None:
        if cli_value < 1:
            raise ValueError(f"Thread count must be positive, got {cli_value}")
        return cli_value

    env_value = os.getenv(THREADS_ENV_VAR)
    if env_value:
        try:
            threads = int(env_value)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got '{env_value}'")
        if threads < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be positive, got {threads}")
        return threads

    return os.cpu_count() or 1
