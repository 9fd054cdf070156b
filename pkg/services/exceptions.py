"""
Error types raised by the lab services.
Each carries the CLI exit code it maps to.
"""

from typing import Optional


class LabError(Exception):
    """Base class for lab failures"""
    exit_code = 3


class DomainError(LabError, ValueError):
    """Parameter outside the domain of an operation"""
    exit_code = 2


class ConfigurationError(LabError, ValueError):
    """Invalid run configuration or inadequate discretization grid"""
    exit_code = 2


class ContractError(LabError, ValueError):
    """Input violates an operation's contract (shape, symmetry, ordering)"""
    exit_code = 2


class NumericError(LabError, RuntimeError):
    """Quadrature or solver failure"""
    exit_code = 3

    def __init__(self, message: str, error_estimate: Optional[float] = None):
        super().__init__(message)
        self.error_estimate = error_estimate


class CapacityError(LabError, RuntimeError):
    """Problem size exceeds a configured limit"""
    exit_code = 4
