"""Exception types raised across the package."""


class SolrepError(Exception):
    """Base class for all package errors."""


class DimensionError(SolrepError, ValueError):
    """Array shapes or grid sizes are incompatible with the operation."""


class DegeneracyError(SolrepError):
    """|G| came within the degeneracy margin of 1."""

    def __init__(self, message, index=None, step=None):
        super().__init__(message)
        self.index = index
        self.step = step


class BlowUpError(SolrepError):
    """A computation produced non-finite values."""

    def __init__(self, message, index=None, step=None):
        super().__init__(message)
        self.index = index
        self.step = step


class PreconditionError(SolrepError, ValueError):
    """Inputs violate a documented precondition."""


class ValidationError(PreconditionError):
    """Björling data violates one of its invariants.

    ``condition`` is a short machine-readable name of the violated rule and
    ``index`` the first offending sample (or None for global conditions).
    """

    def __init__(self, condition, message, index=None):
        super().__init__(f"{condition}: {message}" + ("" if index is None else f" (sample {index})"))
        self.condition = condition
        self.index = index


class DomainExitError(SolrepError):
    """An ODE profile left the admissible range |m| < 1."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainError(SolrepError, ValueError):
    """Surface leaves the domain of the weight (z <= 0 when k != 1)."""


class MetricDegeneracyError(SolrepError):
    """First fundamental form is singular somewhere."""


class AlignmentError(SolrepError):
    """A patch cannot be aligned to its Björling data."""
