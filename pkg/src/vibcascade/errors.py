"""Exception and warning types shared across the package."""

from __future__ import annotations


class VibcascadeError(Exception):
    """Base class for all package-specific errors."""


class CurveParseError(VibcascadeError):
    """A curve data file could not be parsed (carries the line number)."""


class ValidationError(VibcascadeError):
    """Input data violates a documented precondition or invariant."""


class ConfigError(VibcascadeError):
    """A pipeline configuration is malformed or inconsistent."""


class DomainError(VibcascadeError):
    """Evaluation requested outside the physically meaningful domain."""


class ResourceLimitError(VibcascadeError):
    """A computation would exceed a configured resource cap."""


class CoverageError(VibcascadeError):
    """A populated level has no branching row to redistribute it."""


class ConvergenceError(VibcascadeError):
    """An iterative step failed to make progress within its step cap."""


class UndefinedDistributionError(VibcascadeError):
    """A branching distribution was requested for a non-radiating level."""


class GridMismatchError(ValidationError):
    """Two wavefunctions defined on different grids were combined."""


class BoundaryContaminationWarning(UserWarning):
    """A level's classical turning point sits too close to the box edge."""


class BoundaryContaminationError(VibcascadeError):
    """Strict-mode escalation of :class:`BoundaryContaminationWarning`."""
