"""
Exception types raised by the influence toolkit
"""
from typing import Optional


class NewfluenceError(Exception):
    """Base class for every error raised by this package"""


class InvalidArgumentError(NewfluenceError, ValueError):
    """Non-finite input, dimension mismatch or otherwise unusable argument"""


class DomainError(NewfluenceError, ValueError):
    """Input outside the mathematical domain of a loss or penalty"""


class SingularHessianError(NewfluenceError, RuntimeError):
    """Cholesky factorization of the objective Hessian failed"""


class DegenerateLeverageError(NewfluenceError, RuntimeError):
    """Leverage too close to one for the leave-one-out corrections to apply"""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class ConvergenceError(NewfluenceError, RuntimeError):
    """A fit that must be exact did not reach its tolerance"""


class UsageError(NewfluenceError):
    """Command-line usage error"""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag


class ResultsWriteError(NewfluenceError, OSError):
    """Writing a results file failed"""

    def __init__(self, message: str, path: str):
        super().__init__(message)
        self.path = path
