"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto its exit-code contract (2 = usage, 3 = accuracy, 4 = domain)
without inspecting exception types one by one.
"""
from __future__ import annotations


class FockToeplitzError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(FockToeplitzError):
    """The input is outside the domain of the requested operation.

    Examples: a non-radial symbol passed to a gamma-sequence computation,
    a non-polynomial symbol passed to the diamond product.
    """

    exit_code = 4


class DivergenceError(DomainError):
    """A defining integral or series diverges for the given parameters."""


class AccuracyError(FockToeplitzError):
    """The requested tolerance cannot be certified."""

    exit_code = 3


class NonFiniteResultError(AccuracyError):
    """A computation produced an overflow / NaN instead of a usable value."""


class RuleConstructionError(AccuracyError):
    """Quadrature-rule construction failed (eigen-solver did not converge)."""
