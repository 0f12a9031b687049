"""
Lattices and windows

A lattice Gamma = B Z^D in E x E* together with a window chi such that the
normalized translates sum to one:  sum_gamma chi(X - gamma) = 1.

Design:
- WindowSpec is a closed family: the Gaussian 2^{D/2} exp(-|X - c|^2 / s^2)
  (for D = 2n and s = 1, c = 0 this is the projection symbol f0) and a
  product of one-dimensional C-infinity bumps
- Lattice.normalization = |det B| / integral(window): with it the sum of
  translates approximates 1 up to the Poisson aliasing error
- Diagonal bases with product windows factor the lattice sum axis by axis;
  other bases fall back to a direct sum over the truncated lattice
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionError, GridError
from .grids import RealGrid

WINDOW_KINDS = ("gaussian-f0", "bump")

# Number of window scales beyond which the Gaussian is below double precision
_GAUSS_REACH = 7.0


def _bump_1d(t: np.ndarray) -> np.ndarray:
    """exp(-1/(1 - t^2)) on |t| < 1, zero elsewhere"""
    out = np.zeros_like(t, dtype=float)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


# integral of exp(-1/(1-t^2)) over (-1, 1)
_BUMP_INTEGRAL = 0.443993816168079


@dataclass(frozen=True, eq=False)
class WindowSpec:
    """
    Window function on a D-dimensional space.

    Attributes:
        kind: 'gaussian-f0' or 'bump'
        center: Center point (length D)
        scale: Positive width
        amplitude: Overall factor (0 gives the zero window)
    """

    kind: str
    center: Tuple[float, ...]
    scale: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in WINDOW_KINDS:
            raise GridError(f"unknown window kind {self.kind!r}; known: {WINDOW_KINDS}")
        if self.scale <= 0:
            raise GridError(f"window scale must be positive, got {self.scale}")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @classmethod
    def f0(cls, dim: int = 2) -> "WindowSpec":
        return cls("gaussian-f0", (0.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def reach(self) -> float:
        """Radius per axis outside which the window is negligible"""
        return self.scale * (_GAUSS_REACH if self.kind == "gaussian-f0" else 1.0)

    def factor(self, t: np.ndarray, axis: int) -> np.ndarray:
        """One-dimensional factor along the given axis (amplitude excluded)"""
        s = (np.asarray(t, dtype=float) - self.center[axis]) / self.scale
        if self.kind == "gaussian-f0":
            return np.exp(-s * s)
        return _bump_1d(s)

    @property
    def prefactor(self) -> float:
        """2^{D/2} for the Gaussian (so D = 2n gives f0), 1 for the bump"""
        return 2.0 ** (self.dim / 2) if self.kind == "gaussian-f0" else 1.0

    def factor_integral(self) -> float:
        if self.kind == "gaussian-f0":
            return np.sqrt(np.pi) * self.scale
        return _BUMP_INTEGRAL * self.scale

    def shape_integral(self) -> float:
        """Integral of the window without its amplitude"""
        return self.prefactor * self.factor_integral() ** self.dim

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise DimensionError(f"window of dimension {self.dim} got points of {X.shape[-1]}")
        out = np.full(X.shape[:-1], float(self.amplitude) * self.prefactor)
        for k in range(self.dim):
            out = out * self.factor(X[..., k], k)
        return out


@dataclass(frozen=True, eq=False)
class Lattice:
    """
    Gamma = basis @ Z^D with a partition window.

    Attributes:
        basis: D x D invertible matrix, columns e_1..e_D
        window: The window chi (before normalization)
        scale_override: Optional explicit normalization
    """

    basis: np.ndarray
    window: WindowSpec
    scale_override: Optional[float] = None
    _det: float = field(init=False, repr=False, default=0.0)

    def __post_init__(self) -> None:
        B = np.asarray(self.basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionError(f"lattice basis must be square, got shape {B.shape}")
        if B.shape[0] != self.window.dim:
            raise DimensionError("lattice and window dimensions differ")
        det = float(np.linalg.det(B))
        if not np.isfinite(det) or abs(det) < 1e-14 * max(1.0, np.abs(B).max() ** B.shape[0]):
            raise GridError(f"lattice basis is not invertible (det = {det:.3e})")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "_det", det)

    @classmethod
    def cubic(cls, dim: int, step: float, window: Optional[WindowSpec] = None) -> "Lattice":
        return cls(step * np.eye(dim), window or WindowSpec.f0(dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_diagonal(self) -> bool:
        return bool(np.all(self.basis == np.diag(np.diag(self.basis))))

    @property
    def normalization(self) -> float:
        """c with sum_gamma c * chi(X - gamma) ~ amplitude"""
        if self.scale_override is not None:
            return float(self.scale_override)
        return abs(self._det) / self.window.shape_integral()

    def points(self, radius: float) -> np.ndarray:
        """Lattice points with |gamma| <= radius"""
        smin = float(np.linalg.svd(self.basis, compute_uv=False).min())
        K = int(np.ceil(radius / smin)) + 1
        ks = np.array(list(itertools.product(range(-K, K + 1), repeat=self.dim)), dtype=float)
        pts = ks @ self.basis.T
        return pts[np.linalg.norm(pts, axis=1) <= radius]

    def bracket_points(self, radius: float) -> np.ndarray:
        """Lattice points with <gamma> <= radius"""
        if radius < 1.0:
            return np.zeros((0, self.dim))
        return self.points(np.sqrt(radius * radius - 1.0))

    def chi(self, gamma: np.ndarray) -> WindowSpec:
        """Normalized window translated to gamma: tau_gamma chi"""
        w = self.window
        return WindowSpec(w.kind, tuple(np.asarray(w.center) + gamma), w.scale,
                          w.amplitude * self.normalization)


def partition_check(lattice: Lattice, grid: RealGrid, shift=None,
                    radius: Optional[float] = None) -> float:
    """
    Sup-norm deviation of sum_gamma tau_gamma chi from 1 over the grid nodes.

    Args:
        lattice: Lattice with window
        grid: Grid of the same dimension
        shift: Optional vector added to every node
        radius: Truncation radius (default: box diagonal plus window reach)

    Returns:
        max |sum_gamma c chi(X - gamma) - 1|
    """
    if grid.dim != lattice.dim:
        raise DimensionError(f"grid dimension {grid.dim} differs from lattice {lattice.dim}")
    offset = np.zeros(grid.dim) if shift is None else np.asarray(shift, dtype=float)
    w = lattice.window
    c = lattice.normalization * w.amplitude
    reach = w.reach + float(np.abs(w.center).max(initial=0.0))

    if lattice.is_diagonal:
        total = np.full(grid.shape, w.prefactor)
        for k in range(grid.dim):
            step = abs(lattice.basis[k, k])
            t = grid.axis() + offset[k]
            R = radius if radius is not None else np.abs(t).max() + reach
            ks = np.arange(-np.ceil(R / step) - 1, np.ceil(R / step) + 2)
            s = w.factor(t[:, None] - ks[None, :] * step, k).sum(axis=1)
            shape = [1] * grid.dim
            shape[k] = -1
            total = total * s.reshape(shape)
        return float(np.abs(c * total - 1.0).max())

    pts = grid.points() + offset
    R = radius if radius is not None else float(np.linalg.norm(pts, axis=1).max()) + reach
    gammas = lattice.points(R)
    total = np.zeros(len(pts))
    for g in gammas:
        unit = WindowSpec(w.kind, tuple(np.asarray(w.center) + g), w.scale, 1.0)
        total += unit(pts)
    return float(np.abs(c * total - 1.0).max())
