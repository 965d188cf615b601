"""Exceptions."""

from __future__ import annotations


class FactorisationError(Exception):
    """Base class for every error raised by the checker."""


class DimensionError(FactorisationError):
    """Generator counts, block sizes or sector spaces do not match."""


class SpectralError(FactorisationError):
    """A matrix that should be positive definite is not."""

    def __init__(self, message: str, eigenvalue: float) -> None:
        super().__init__(f"{message} (smallest eigenvalue {eigenvalue:.6g})")
        self.eigenvalue = eigenvalue


class WindowError(FactorisationError):
    """A character lies outside the truncation window."""


class MetricError(FactorisationError):
    """Metric data is missing or not positive."""


class ConfigurationError(FactorisationError):
    """Grid, margin or window choices that cannot be honoured."""


class PreconditionError(FactorisationError):
    """Inputs violate an operation's precondition."""


class ScenarioError(FactorisationError):
    """A scenario file failed to parse or validate."""

    def __init__(self, message: str, line: int | None = None) -> None:
        location = f"line {line}: " if line is not None else ""
        super().__init__(f"{location}{message}")
        self.line = line
