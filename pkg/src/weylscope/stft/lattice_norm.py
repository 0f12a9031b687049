"""
Lattice form of the S~(m) norm:

    sup_{gamma in Gamma} ||chi_gamma^w a||_{L^2(E)} / m(gamma)

Here a is regarded as a function on E = R^2 and chi_gamma = tau_gamma chi is a
window on T*E = E x E*. Both window kinds are products over the coordinate
pairs (y_k, eta_k), so chi_gamma^w = K_1 (x) K_2 with one-dimensional Weyl
kernels and chi_gamma^w a = K_1 A K_2^T h^2. The lattice must be diagonal.

This definition is quadratic in the grid size per lattice point and is meant
for small grids only; the STFT norm is the primary one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.errors import DimensionError, GridError, TruncationWarning
from ..core.grids import RealGrid, SampledSymbol, japanese_bracket
from ..core.lattice import Lattice
from ..core.order_functions import OrderFunction
from ..utils.fourier import interpolation_matrix
from ..weyl.kernels import sample_symbol, symbol_to_kernel

# Default function grid on E for the lattice norm
DEFAULT_SPACE = RealGrid(2, 6.0, 32)

DEFAULT_RADIUS = 3.0

# Shell/max ratio above which the truncated lattice sup is reported
SHELL_TOLERANCE = 0.01


@dataclass(frozen=True)
class LatticeNormResult:
    """Lattice S~(m) norm with diagnostics"""

    value: float
    argmax: Tuple[float, ...]
    shell_max: float
    truncation_flag: bool
    points: int


def symbol_on_space(a: SampledSymbol, space: RealGrid) -> np.ndarray:
    """Values of a (n = 1) as a function on the grid `space` over E = R^2"""
    if a.grid.n != 1 or space.dim != 2:
        raise DimensionError("the lattice norm is implemented for n = 1")
    ax = space.axis()
    Mx = interpolation_matrix(a.grid.x.axis(), ax)
    Mxi = interpolation_matrix(a.grid.xi.axis(), ax)
    Mx[(ax < -a.grid.x.half_width) | (ax >= a.grid.x.half_width), :] = 0.0
    Mxi[(ax < -a.grid.xi.half_width) | (ax >= a.grid.xi.half_width), :] = 0.0
    return Mx @ a.values @ Mxi.T


def window_kernels(lattice: Lattice, gamma: np.ndarray, space: RealGrid):
    """One-dimensional Weyl kernels K_1, K_2 with chi_gamma^w = c K_1 (x) K_2"""
    chi = lattice.chi(np.asarray(gamma, dtype=float))
    line = RealGrid(1, space.half_width, space.points_per_axis)
    kernels = []
    for k in range(2):
        s = sample_symbol(
            lambda y, eta, k=k: chi.factor(y, k) * chi.factor(eta, k + 2),
            line,
            label=f"chi_{k}",
        )
        kernels.append(symbol_to_kernel(s).entries)
    return chi.amplitude * chi.prefactor, kernels[0], kernels[1]


def lattice_stilde_norm(a: SampledSymbol, lattice: Lattice, m: OrderFunction,
                        radius: float = DEFAULT_RADIUS, space: RealGrid = DEFAULT_SPACE,
                        warn: bool = True) -> LatticeNormResult:
    """
    sup over <gamma> <= radius of ||chi_gamma^w a||_{L^2(E)} / m(gamma).

    Args:
        a: Symbol (n = 1)
        lattice: Diagonal lattice in E x E* (dim 4) with its window
        m: Order function on E x E*
        radius: Truncation radius in <gamma>
        space: Function grid on E on which chi_gamma^w acts

    Warns:
        TruncationWarning: If the outermost lattice shell reaches 1% of the max
    """
    if lattice.dim != 4 or m.ambient_dim != 4:
        raise DimensionError("lattice and order function must live on E x E* with n = 1")
    if not lattice.is_diagonal:
        raise GridError("the lattice norm needs a diagonal lattice basis")
    A = symbol_on_space(a, space)
    h2 = space.quad_weight
    gammas = lattice.bracket_points(radius)
    if len(gammas) == 0:
        return LatticeNormResult(0.0, (), 0.0, False, 0)
    smax = float(np.abs(np.diag(lattice.basis)).max())
    ratios = np.empty(len(gammas))
    for k, g in enumerate(gammas):
        c, K1, K2 = window_kernels(lattice, g, space)
        out = c * (K1 @ A @ K2.T) * h2
        ratios[k] = np.sqrt(np.sum(np.abs(out) ** 2) * h2) / float(m(g))
    best = int(np.argmax(ratios))
    shell = japanese_bracket(gammas) > radius - smax
    shell_max = float(ratios[shell].max()) if np.any(shell) else 0.0
    value = float(ratios[best])
    flag = value > 0 and shell_max > SHELL_TOLERANCE * value
    if flag and warn:
        warnings.warn(
            f"outer lattice shell reaches {shell_max / value:.2%} of the maximum at radius {radius:g}",
            TruncationWarning,
            stacklevel=2,
        )
    return LatticeNormResult(value, tuple(float(v) for v in gammas[best]), shell_max, flag, len(gammas))
