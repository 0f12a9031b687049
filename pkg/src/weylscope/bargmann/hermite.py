"""
Hermite functions h_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x) exp(-x^2/2).

h_0 = e_0 is the ground state; the batch h_0..h_4 is the admissible test
batch of the transform checks.
"""

from __future__ import annotations

from typing import List

import numpy as np
from scipy.special import eval_hermite, factorial

from ..core.errors import DimensionError
from ..core.grids import RealGrid, SampledFunction

BATCH_SIZE = 5


def hermite_function(k: int, x: np.ndarray) -> np.ndarray:
    if k < 0 or int(k) != k:
        raise ValueError(f"Hermite index must be a non-negative integer, got {k!r}")
    x = np.asarray(x, dtype=float)
    norm = 1.0 / np.sqrt(2.0 ** k * factorial(k, exact=True) * np.sqrt(np.pi))
    return norm * eval_hermite(int(k), x) * np.exp(-0.5 * x * x)


def hermite_sample(k: int, grid: RealGrid) -> SampledFunction:
    if grid.dim != 1:
        raise DimensionError(f"Hermite functions are sampled in one dimension, got {grid.dim}")
    return SampledFunction(grid, hermite_function(k, grid.axis()))


def hermite_batch(grid: RealGrid, size: int = BATCH_SIZE) -> List[SampledFunction]:
    """[h_0, ..., h_{size-1}] on a one-dimensional grid"""
    return [hermite_sample(k, grid) for k in range(size)]
