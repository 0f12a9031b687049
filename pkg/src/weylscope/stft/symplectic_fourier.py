"""
Symplectic Fourier transform

    F_sigma b(X) = pi^{-n} int exp(2i sigma(X, Y)) b(Y) dY,   sigma(X, Y) = JX . Y

For n = 1, X = (x, xi), Y = (y, eta) the phase is 2(xi y - x eta), so the
transform factors into two one-dimensional Fourier matrices with doubled
frequencies:

    F_sigma b = pi^{-1} Q b^T P^T,   P[k, j] = exp(2i xi_k y_j) h,  Q[i, l] = exp(-2i x_i eta_l) h

F_sigma is unitary and an involution; f0 is a fixed point.
"""

from __future__ import annotations

import numpy as np

from ..core.errors import DimensionError
from ..core.grids import SampledSymbol, warn_on_edge_mass
from .transform import square_grid


def symplectic_fourier(b: SampledSymbol) -> SampledSymbol:
    """
    F_sigma b on the grid of b (square phase grid, n = 1).

    Warns:
        BoundaryMassWarning: If b has mass on the grid edge
    """
    grid = square_grid(b)
    if grid.dim != 2:
        raise DimensionError("symplectic_fourier is implemented for n = 1")
    warn_on_edge_mass(b.values, "symplectic_fourier input")
    ax = grid.axis()
    h = grid.spacing
    P = np.exp(2j * np.multiply.outer(ax, ax)) * h
    Q = np.exp(-2j * np.multiply.outer(ax, ax)) * h
    out = Q @ b.values.T @ P.T / np.pi
    return SampledSymbol(b.grid, out, f"F_sigma[{b.label}]" if b.label else None)
