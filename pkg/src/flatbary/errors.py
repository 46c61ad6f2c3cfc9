"""Exception types shared across the library.

Domain violations (non-opposite flags, degenerate configurations, formula
domains) carry a machine-readable payload: the failed predicate, an optional
witness naming the quantity that vanished, and the numerical margin at which
the check failed.  The command line layer maps these onto exit codes.
"""

from __future__ import annotations


class FlatbaryError(Exception):
    """Base class for all library errors."""


class BadDimension(FlatbaryError):
    """Requested matrix size outside the supported range."""


class NumericallySingular(FlatbaryError):
    """Input too close to singular for the requested factorization."""


class NotPositiveDefinite(FlatbaryError):
    """Spectrum not strictly positive within tolerance."""


class PivotBreakdown(FlatbaryError):
    """Unpivoted elimination hit a negligible pivot.

    This is how the library detects that an argument lies outside the open
    cell where the factorization exists.  ``step`` is the zero-based
    elimination step that failed, ``margin`` the relative pivot magnitude
    that fell below the threshold.
    """

    def __init__(self, step, margin, message=None):
        if message is None:
            message = f"pivot {step} below threshold (relative magnitude {margin:.3e})"
        super().__init__(message)
        self.step = step
        self.margin = margin


class DomainViolation(FlatbaryError):
    """A predicate required by the operation does not hold for the input."""

    def __init__(self, predicate, margin=None, witness=None, message=None):
        detail = message if message is not None else predicate
        if witness:
            detail = f"{detail} (witness: {witness})"
        super().__init__(detail)
        self.predicate = predicate
        self.margin = margin
        self.witness = witness


class NotOpposite(DomainViolation):
    """Two flags are not in general position."""


class NotGeneric(DomainViolation):
    """A configuration misses the open set where the construction is defined."""


class WrongGroupType(DomainViolation):
    """Operation requires the longest Weyl element to act as inversion."""


class FormulaDomain(DomainViolation):
    """A closed-form expression was evaluated where a denominator vanishes."""


class DegenerateBoundary(DomainViolation):
    """An ideal boundary argument coincides with a distinguished point."""


class DegeneratePair(DomainViolation):
    """Two ideal points that must be distinct coincide."""


class NoConvergence(FlatbaryError):
    """Fixed-point iteration ran out of iterations.

    Carries the last iterate and the gradient norm reached so callers can
    inspect how far the iteration got.
    """

    def __init__(self, last, grad_norm, max_iter):
        super().__init__(
            f"no convergence after {max_iter} iterations "
            f"(gradient norm {grad_norm:.3e})"
        )
        self.last = last
        self.grad_norm = grad_norm
        self.max_iter = max_iter


class GenerationExhausted(FlatbaryError):
    """Rejection sampling failed to produce a valid instance."""
