"""
Short-time Fourier analysis of symbols.

This package provides:
- gaussian_window_f: the windows f_T
- stft / stilde_norm: the S~(m) norm by the Gaussian STFT criterion
- lattice_stilde_norm: the lattice definition, for small cross-checks
- mollify: the approximation u_nu of a symbol by Schwartz functions
- symplectic_fourier: F_sigma
"""

from .lattice_norm import LatticeNormResult, lattice_stilde_norm
from .mollify import MollifierSpec, mollify
from .symplectic_fourier import symplectic_fourier
from .transform import (
    NormResult,
    STFTTable,
    dense_stilde_norm,
    export_stft_csv,
    locate_stilde_norm,
    stft,
    stilde_norm,
)
from .windows import gaussian_window_f, ground_state

__all__ = [
    "gaussian_window_f",
    "ground_state",
    "STFTTable",
    "NormResult",
    "stft",
    "stilde_norm",
    "locate_stilde_norm",
    "dense_stilde_norm",
    "export_stft_csv",
    "lattice_stilde_norm",
    "LatticeNormResult",
    "MollifierSpec",
    "mollify",
    "symplectic_fourier",
]
