"""Exception hierarchy shared by every cubicflow module.

Each class carries the process exit code the CLI maps it to, plus a free-form
``details`` dict that ends up in the machine-readable error report.
"""
from __future__ import annotations

from typing import Any, Dict, Optional


class CubicFlowError(Exception):
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_report(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ValidationError(CubicFlowError):
    """Malformed or out-of-domain input."""
    exit_code = 2


class DegenerateParametrizationError(ValidationError):
    """c = a1*b2 - a2*b1 vanishes (or a parameter that must not vanish does)."""


class NumericalError(CubicFlowError):
    exit_code = 3


class DomainError(NumericalError):
    pass


class BlowUpError(NumericalError):
    def __init__(self, message: str, t_star: complex, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.t_star = t_star


class SingularFactorError(NumericalError):
    pass


class ContinuationFailure(NumericalError):
    def __init__(self, message: str, t: complex, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.t = t


class PathSingularError(NumericalError):
    pass


class SingularTrajectoryError(NumericalError):
    pass


class FormulaInapplicableError(NumericalError):
    pass


class CompletionFailure(NumericalError):
    pass


class InversionError(NumericalError):
    pass


class ConstraintError(CubicFlowError):
    """Input does not lie on the solvability manifold."""
    exit_code = 4
