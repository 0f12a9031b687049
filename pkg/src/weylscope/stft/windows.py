"""
Gaussian windows on phase space: f_T(Y) = 2^n exp(-|Y - T|^2).

f_0 is the Weyl symbol of the orthogonal projection onto the ground state
e_0(x) = pi^{-1/4} exp(-x^2/2).
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from ..core.errors import DimensionError
from ..core.grids import PhaseGrid, RealGrid, SampledSymbol


def f0_values(points: np.ndarray, center: Union[Sequence[float], np.ndarray, None] = None) -> np.ndarray:
    """2^n exp(-|Y - T|^2) at points of shape (..., 2n)"""
    points = np.asarray(points, dtype=float)
    dim = points.shape[-1]
    if dim % 2:
        raise DimensionError(f"phase space points need even dimension, got {dim}")
    T = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    if T.shape != (dim,):
        raise DimensionError(f"window center of shape {T.shape} for points of dimension {dim}")
    diff = points - T
    return 2.0 ** (dim // 2) * np.exp(-np.sum(diff * diff, axis=-1))


def gaussian_window_f(T: Union[Sequence[float], np.ndarray], grid: Union[RealGrid, PhaseGrid]) -> SampledSymbol:
    """
    f_T sampled on a phase-space grid.

    Args:
        T: Center, a point of E (length 2n)
        grid: PhaseGrid, or a RealGrid of even dimension

    Raises:
        DimensionError: If len(T) != 2n
    """
    pg = grid if isinstance(grid, PhaseGrid) else PhaseGrid.from_real(grid)
    T = np.asarray(T, dtype=float)
    if T.shape != (pg.dim,):
        raise DimensionError(f"T must have length {pg.dim}, got shape {T.shape}")
    mesh = pg.mesh()
    Y = np.stack(mesh, axis=-1)
    return SampledSymbol(pg, f0_values(Y, T), label=f"f_T{tuple(float(t) for t in T)}")


def ground_state(x: np.ndarray) -> np.ndarray:
    """e_0(x) = pi^{-n/4} exp(-|x|^2 / 2) for x of shape (..., n)"""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return np.pi ** (-n / 4) * np.exp(-0.5 * np.sum(x * x, axis=-1))
