"""Exceptions raised by oscint."""
from __future__ import annotations

from typing import Any, Dict, Optional


class OscintError(Exception):
    """Base exception for oscint errors."""


class PolynomialError(OscintError):
    """Malformed polynomial or series input."""


class DomainError(OscintError):
    """Argument outside the domain of an operation."""


class ConvergenceError(OscintError):
    """Numerical procedure did not reach the requested accuracy.

    Args:
        message: Human readable description
        diagnostics: Route-specific counters collected before giving up
    """

    def __init__(
        self, message: str, diagnostics: Optional[Dict[str, Any]] = None
    ) -> None:
        """Initialize the error."""
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})


class ConfigError(OscintError):
    """Invalid configuration value or config file line."""
