"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ShiftRulesError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(ShiftRulesError):
    """Operands have incompatible shapes."""


class NonHermitianError(ShiftRulesError):
    """A matrix required to be Hermitian fails the tolerance check."""


class NumericalFailureError(ShiftRulesError):
    """An eigensolver did not converge or a result failed its sanity check."""


class ImaginaryResidueError(ShiftRulesError):
    """A nominally real expectation value came out with a large imaginary part."""


class InvalidKError(ShiftRulesError):
    """Band limit K must be a positive real number."""


class NotIntegerError(ShiftRulesError):
    """A ratio that must be a positive integer is not one (within tolerance)."""


class NotMultipleError(ShiftRulesError):
    """c/p must be a positive integer for the tail-wrapping fold."""


class SpectrumError(ShiftRulesError):
    """An operator's spectrum violates a required form (e.g. eigenvalues not in {-1,+1})."""


class SchemaError(ShiftRulesError):
    """A data file does not match the expected schema."""
