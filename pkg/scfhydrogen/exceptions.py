"""
Exceptions for the scfhydrogen library.
"""
from typing import Any, List, Optional, Tuple


class SCFException(Exception):
    """Base exception for scfhydrogen"""
    pass


class SCFInputError(SCFException):
    """Exception raised for invalid inputs to a numerical operation"""
    pass


class SCFEnergyError(SCFInputError):
    """Exception raised when a trial energy is not below the potential tail"""
    pass


class SCFNoBoundStateError(SCFException):
    """Exception raised when no bound state exists in the searched energy window"""
    def __init__(
        self,
        message: str,
        particle: Optional[str] = None,
        iteration: Optional[int] = None,
        residual_history: Optional[List[Any]] = None,
    ):
        self.detail = message
        self.particle = particle
        self.iteration = iteration
        self.residual_history = residual_history or []
        prefix = f"{particle}: " if particle else ""
        super().__init__(f"{prefix}{message}")


class SCFConvergenceError(SCFException):
    """Exception raised when an iteration cap is exceeded"""
    def __init__(
        self,
        message: str,
        bracket: Optional[Tuple[float, float]] = None,
        residual_history: Optional[List[Any]] = None,
        last_solution: Optional[Any] = None,
    ):
        self.bracket = bracket
        self.residual_history = residual_history or []
        self.last_solution = last_solution
        super().__init__(message)


class SCFConfigurationError(SCFException):
    """Exception raised for configuration issues"""
    def __init__(self, message: str, errors: Optional[List[Tuple[str, str]]] = None):
        self.errors = errors or []
        details = "; ".join(f"{key}: {msg}" for key, msg in self.errors)
        super().__init__(f"{message}: {details}" if details else message)


class SCFStoreError(SCFException):
    """Exception raised for run registry SQL execution errors"""
    def __init__(self, message: str, sql: str, original_error: Optional[Exception] = None):
        self.sql = sql
        self.original_error = original_error
        super().__init__(f"{message}: {str(original_error) if original_error else ''}")
