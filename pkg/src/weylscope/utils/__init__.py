"""
Numerical utilities shared across modules: Fourier conventions and
band-limited interpolation.
"""

from .fourier import (
    centered_fft,
    centered_ifft,
    default_workers,
    fractional_shift,
    interpolation_matrix,
    spectral_derivative,
)

__all__ = [
    "centered_fft",
    "centered_ifft",
    "default_workers",
    "fractional_shift",
    "interpolation_matrix",
    "spectral_derivative",
]
