"""Exception types shared across the library."""

from __future__ import annotations


class KreissLabError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(KreissLabError, ValueError):
    """An argument, grid, or experiment configuration violates a precondition."""


class ResolventUndefinedError(KreissLabError):
    """The resolvent does not exist at the requested point (lambda hits the spectrum)."""

    def __init__(self, lam: complex, message: str | None = None):
        self.lam = complex(lam)
        super().__init__(message or f"resolvent undefined at lambda={self.lam}")


class NumericalFailureError(KreissLabError):
    """A numerical routine exhausted its subdivision or iteration budget."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class FitError(KreissLabError):
    """Constant estimation or growth-model fitting received unusable data."""
