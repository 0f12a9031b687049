"""
Real-side Weyl calculus.

- kernels: the kernel map U and its inverse, a^w u, the # product
- schur: Schur bounds for m(q(x, y)) and composed order functions
"""

from .kernels import (
    FOURIER_MIDPOINT_LIMIT,
    KernelMatrix,
    apply_weyl,
    default_midpoint,
    frequency_taper,
    kernel_to_symbol,
    moyal_compose,
    resample_symbol,
    sample_symbol,
    symbol_to_kernel,
    weyl_adjoint_kernel,
    weyl_grid,
)
from .schur import SchurBounds, compose_order_functions, composed_weight_at, schur_bounds, schur_matrix

__all__ = [
    "KernelMatrix",
    "weyl_grid",
    "sample_symbol",
    "resample_symbol",
    "frequency_taper",
    "symbol_to_kernel",
    "kernel_to_symbol",
    "default_midpoint",
    "FOURIER_MIDPOINT_LIMIT",
    "apply_weyl",
    "moyal_compose",
    "weyl_adjoint_kernel",
    "SchurBounds",
    "schur_bounds",
    "schur_matrix",
    "compose_order_functions",
    "composed_weight_at",
]
