"""Exception hierarchy shared by every module of the kit."""

from __future__ import annotations


class NonlocalKitError(Exception):
    """Base class for all errors raised by nonlocal_kit."""


class DomainError(NonlocalKitError, ValueError):
    """An argument lies outside the domain of a formula."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class ConfigurationError(NonlocalKitError, ValueError):
    """Parameters describe a geometry the operation does not support."""


class RegimeError(NonlocalKitError, ValueError):
    """Exponent p lies outside the range where a statement applies."""


class DivergenceError(NonlocalKitError, ArithmeticError):
    """An integral is not absolutely convergent under the declared data."""


class QuadratureError(NonlocalKitError, ArithmeticError):
    """Adaptive integration could not reach the requested tolerance.

    ``estimate`` and ``error`` hold the best value found and its error bound.
    """

    def __init__(self, message: str, estimate: float = float("nan"),
                 error: float = float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class LAlphaError(DivergenceError, ValueError):
    """Declared decay of a field is contradicted by sampled values."""


class BoundaryError(DomainError):
    """Point lies exactly on a sphere where a kernel is undefined."""


class SingularPointError(DomainError):
    """Transform evaluated at its centre of inversion."""
