"""
Configuration module
"""
from .settings import (
    LOG_LEVEL, PRESETS_DIR, DEFAULT_TOL, DEFAULT_MAX_ITER, MAX_HALVINGS,
    LEVERAGE_EPS, resolve_thread_count
)

__all__ = [
    "LOG_LEVEL", "PRESETS_DIR", "DEFAULT_TOL", "DEFAULT_MAX_ITER", "MAX_HALVINGS",
    "LEVERAGE_EPS", "resolve_thread_count"
]
