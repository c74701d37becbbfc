"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the command-line
front end can map it to an error object and a nonzero exit status.
"""

from __future__ import annotations


class SymreebError(Exception):
    code = "error"
    exit_status = 1

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DimensionError(SymreebError, ValueError):
    code = "dimension"


class InvariantError(SymreebError, ValueError):
    code = "invariant"


class IndeterminateRankError(SymreebError):
    """A singular value sits inside the ambiguity band around the threshold."""

    code = "indeterminate-rank"

    def __init__(self, message, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values


class NoCrossingError(SymreebError):
    code = "no-crossing"


class ResolutionError(SymreebError):
    code = "resolution"


class DegenerateCrossingError(SymreebError):
    """Non-regular crossing without a zero-form certificate.

    Use the spectral-flow route (:func:`symreeb.specflow.mu_spectral`) instead.
    """

    code = "degenerate-crossing"

    def __init__(self, message, time=None, form=None):
        super().__init__(message)
        self.time = time
        self.form = form


class BorderlineEigenvalueError(SymreebError):
    code = "borderline-eigenvalue"

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class LabelAmbiguityError(SymreebError):
    code = "label-ambiguity"


class AssemblyError(SymreebError):
    code = "assembly"


class FormError(SymreebError, ValueError):
    code = "form"


class HypothesisError(SymreebError):
    code = "hypothesis"


class PairingError(SymreebError):
    code = "pairing"


class PreconditionError(SymreebError, ValueError):
    code = "precondition"


class ComplexInvariantError(SymreebError):
    code = "complex-invariant"


class RelationError(SymreebError):
    code = "relation"

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class GradingError(SymreebError):
    code = "grading"


class IntegrationError(SymreebError):
    code = "integration"

    def __init__(self, message, worst_time=None):
        super().__init__(message)
        self.worst_time = worst_time


class ShootingError(SymreebError):
    code = "shooting"


class ConfigError(SymreebError):
    code = "config"
    exit_status = 2
