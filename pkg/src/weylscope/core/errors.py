"""
Errors and warnings

Every failure raised by weylscope derives from WeylscopeError, so callers can
catch the whole family at once. Numerical diagnostics that should not stop a
computation (mass near a grid edge, aliasing, truncated sums) are Python
warnings with their own categories; results that carry such a diagnostic also
expose a boolean flag so the verification suites can record it.
"""

from __future__ import annotations

from typing import Any, Optional, Sequence


class WeylscopeError(Exception):
    """Base exception for weylscope"""
    pass


class GridError(WeylscopeError, ValueError):
    """Raised when a grid is malformed or two grids do not match"""
    pass


class DimensionError(WeylscopeError, ValueError):
    """Raised when point or array dimensions do not fit the operation"""
    pass


class CertificationError(WeylscopeError):
    """
    Raised when an order function fails certification.

    Attributes:
        point: The offending sample point (or pair of points)
        value: The offending value (ratio or weight)
    """

    def __init__(self, message: str, point: Optional[Sequence[Any]] = None, value: Any = None):
        super().__init__(message)
        self.point = point
        self.value = value


class SingularFormError(WeylscopeError):
    """
    Raised when a linear solve in the quadratic calculus is singular.

    Attributes:
        label: Which phase (or phase pair) produced the singular system
    """

    def __init__(self, message: str, label: str = ""):
        super().__init__(f"{message} [{label}]" if label else message)
        self.label = label


class PhaseError(WeylscopeError, ValueError):
    """Raised when a quadratic phase violates det B != 0 or Im C > 0"""
    pass


class ShiftOutOfBoxError(WeylscopeError):
    """Raised when a translation would move mass out of the computational box"""
    pass


class RegistryError(WeylscopeError):
    """Base exception for registry lookups"""
    pass


class UnknownEntryError(RegistryError, KeyError):
    """Raised when a registry has no entry with the requested name"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class SpecSyntaxError(RegistryError, ValueError):
    """Raised when a 'name:key=value' spec string cannot be parsed"""
    pass


class ConfigError(WeylscopeError, ValueError):
    """Raised when a suite configuration is invalid"""
    pass


class ReportError(WeylscopeError, OSError):
    """
    Raised when a report cannot be written.

    Attributes:
        path: The path that failed
    """

    def __init__(self, message: str, path: Any = None):
        super().__init__(f"{message}: {path}" if path is not None else message)
        self.path = path


# Warning categories

class WeylscopeWarning(UserWarning):
    """Base category for numerical diagnostics"""
    pass


class BoundaryMassWarning(WeylscopeWarning):
    """Integrand mass at the edge of the grid is above tolerance"""
    pass


class AliasingWarning(WeylscopeWarning):
    """A symbol has significant mass near the frequency boundary"""
    pass


class TruncationWarning(WeylscopeWarning):
    """The outermost shell of a truncated sum contributes too much"""
    pass


class GrowthWarning(WeylscopeWarning):
    """An unbounded symbol leaves mass at the edge of a composed kernel"""
    pass
