"""
Grids and sampled data

Every computation in weylscope runs on uniform, endpoint-excluded tensor grids.

Design:
- RealGrid: nodes -L + k*(2L/N), k = 0..N-1, on every axis; N must be even so
  that 0 is a node (index N/2) and the centred DFT is unambiguous
- Quadrature is the trapezoid rule on the torus: equal weights spacing**dim
- PhaseGrid: a grid over phase space E = T*R^n made of an x-grid and a
  xi-grid; the two factors may have different spacings (the Weyl calculus
  needs that, see PhaseGrid.for_functions)
- SampledFunction / SampledSymbol: immutable value arrays tied to a grid

Grids are validated at construction; a zero-length or odd-sized grid never
exists.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import BoundaryMassWarning, DimensionError, GridError

# Relative edge mass above which a boundary warning is issued
EDGE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class RealGrid:
    """
    Uniform tensor grid on the box [-L, L)^dim.

    Attributes:
        dim: Spatial dimension
        half_width: Half width L of the box
        points_per_axis: Number of nodes N per axis (even)
    """

    dim: int
    half_width: float
    points_per_axis: int

    def __post_init__(self) -> None:
        if int(self.dim) != self.dim or self.dim < 1:
            raise GridError(f"dim must be a positive integer, got {self.dim!r}")
        if not np.isfinite(self.half_width) or self.half_width <= 0:
            raise GridError(f"half_width must be positive, got {self.half_width!r}")
        n = self.points_per_axis
        if int(n) != n or n < 2:
            raise GridError(f"points_per_axis must be an integer >= 2, got {n!r}")
        if n % 2:
            raise GridError(f"points_per_axis must be even, got {n}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "points_per_axis", int(n))
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dim

    @property
    def quad_weight(self) -> float:
        return self.spacing ** self.dim

    @property
    def center_index(self) -> int:
        return self.points_per_axis // 2

    def axis(self) -> np.ndarray:
        """One-dimensional node array (identical on every axis)"""
        return -self.half_width + self.spacing * np.arange(self.points_per_axis)

    def mesh(self) -> Tuple[np.ndarray, ...]:
        """Coordinate arrays with 'ij' indexing"""
        ax = self.axis()
        return tuple(np.meshgrid(*([ax] * self.dim), indexing="ij"))

    def points(self) -> np.ndarray:
        """All nodes as an array of shape (size, dim), C order"""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def dual(self) -> "RealGrid":
        """Frequency grid of the centred DFT: spacing pi/L, N nodes on [-pi/h, pi/h)"""
        return RealGrid(self.dim, np.pi / self.spacing, self.points_per_axis)

    def refine(self, factor: int = 2) -> "RealGrid":
        """Same box, factor times more nodes per axis"""
        return RealGrid(self.dim, self.half_width, self.points_per_axis * factor)

    def doubled(self) -> "RealGrid":
        """Twice the box at the same spacing (used by divergence tests)"""
        return RealGrid(self.dim, 2.0 * self.half_width, 2 * self.points_per_axis)

    def with_dim(self, dim: int) -> "RealGrid":
        return RealGrid(dim, self.half_width, self.points_per_axis)

    def key(self) -> Tuple[int, float, int]:
        return (self.dim, self.half_width, self.points_per_axis)


def japanese_bracket(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """<x> = (1 + |x|^2)^(1/2) along the given axis"""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + np.sum(x * x, axis=axis))


def _as_values(values: np.ndarray, shape: Tuple[int, ...], what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.size != int(np.prod(shape)):
        raise DimensionError(f"{what}: expected {int(np.prod(shape))} values, got {arr.size}")
    arr = arr.reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise GridError(f"{what}: values must be finite")
    arr.setflags(write=False)
    return arr


def edge_mass(values: np.ndarray) -> float:
    """Largest modulus on the outer faces relative to the overall maximum"""
    mod = np.abs(values)
    peak = float(mod.max()) if mod.size else 0.0
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for ax in range(mod.ndim):
        edge = max(edge, float(np.take(mod, 0, axis=ax).max()))
        edge = max(edge, float(np.take(mod, -1, axis=ax).max()))
    return edge / peak


def warn_on_edge_mass(values: np.ndarray, what: str, tol: float = EDGE_TOLERANCE,
                      stacklevel: int = 3) -> bool:
    """Issue a BoundaryMassWarning when edge mass exceeds tol; returns the flag"""
    ratio = edge_mass(values)
    if ratio > tol:
        warnings.warn(
            f"{what}: edge mass {ratio:.3e} of the maximum exceeds {tol:.0e}",
            BoundaryMassWarning,
            stacklevel=stacklevel,
        )
        return True
    return False


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A function u on R^n sampled on a RealGrid"""

    grid: RealGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_values(self.values, self.grid.shape, "SampledFunction"))

    @classmethod
    def from_callable(cls, func: Callable[..., np.ndarray], grid: RealGrid) -> "SampledFunction":
        return cls(grid, func(*grid.mesh()))

    def inner(self, other: "SampledFunction") -> complex:
        """L^2 pairing (u, v) = sum u * conj(v) * h^n"""
        if other.grid != self.grid:
            raise GridError("inner product of functions on different grids")
        return complex(np.vdot(other.values, self.values) * self.grid.quad_weight)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.quad_weight))

    def scaled(self, factor: complex) -> "SampledFunction":
        return SampledFunction(self.grid, factor * self.values)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        if other.grid != self.grid:
            raise GridError("sum of functions on different grids")
        return SampledFunction(self.grid, self.values + other.values)


@dataclass(frozen=True)
class PhaseGrid:
    """
    Grid over phase space E = T*R^n: x-factor times xi-factor.

    Attributes:
        x: Grid of the position variables (dim n)
        xi: Grid of the frequency variables (dim n)
    """

    x: RealGrid
    xi: RealGrid

    def __post_init__(self) -> None:
        if self.x.dim != self.xi.dim:
            raise GridError(f"x and xi factors differ in dimension: {self.x.dim} vs {self.xi.dim}")

    @classmethod
    def square(cls, n: int, half_width: float, points_per_axis: int) -> "PhaseGrid":
        g = RealGrid(n, half_width, points_per_axis)
        return cls(g, g)

    @classmethod
    def for_functions(cls, grid: RealGrid) -> "PhaseGrid":
        """
        Symbol grid on which the Weyl kernel of functions on `grid` is exact.

        For a function grid with N nodes of spacing h on [-L, L) the x-factor
        has 2N nodes of spacing h/2 on [-L, L) (every midpoint (x + y)/2 of two
        nodes is a node) and the xi-factor has 2N nodes of spacing pi/(2L) on
        [-pi/h, pi/h).
        """
        n = grid.points_per_axis
        x = RealGrid(grid.dim, grid.half_width, 2 * n)
        xi = RealGrid(grid.dim, np.pi / grid.spacing, 2 * n)
        return cls(x, xi)

    def function_grid(self) -> RealGrid:
        """Inverse of for_functions; raises GridError for other symbol grids"""
        n = self.x.points_per_axis // 2
        if n % 2:
            raise GridError("x factor is not the midpoint grid of an even function grid")
        grid = RealGrid(self.x.dim, self.x.half_width, n)
        if not np.isclose(self.xi.half_width, np.pi / grid.spacing, rtol=1e-12) or \
                self.xi.points_per_axis != self.x.points_per_axis:
            raise GridError(
                f"symbol grid {self.key()} is not quantization-compatible; "
                "build it with PhaseGrid.for_functions or resample the symbol"
            )
        return grid

    @classmethod
    def from_real(cls, grid: RealGrid) -> "PhaseGrid":
        """Interpret an even-dimensional RealGrid as E = R^n x R^n"""
        if grid.dim % 2:
            raise DimensionError(f"phase space grid needs even dimension, got {grid.dim}")
        half = grid.with_dim(grid.dim // 2)
        return cls(half, half)

    @property
    def n(self) -> int:
        return self.x.dim

    @property
    def dim(self) -> int:
        return 2 * self.x.dim

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.x.shape + self.xi.shape

    @property
    def spacings(self) -> Tuple[float, ...]:
        return (self.x.spacing,) * self.n + (self.xi.spacing,) * self.n

    @property
    def half_widths(self) -> Tuple[float, ...]:
        return (self.x.half_width,) * self.n + (self.xi.half_width,) * self.n

    @property
    def quad_weight(self) -> float:
        return self.x.quad_weight * self.xi.quad_weight

    @property
    def is_square(self) -> bool:
        return self.x == self.xi

    def axes(self) -> Tuple[np.ndarray, ...]:
        return (self.x.axis(),) * self.n + (self.xi.axis(),) * self.n

    def mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.axes(), indexing="ij"))

    def points(self) -> np.ndarray:
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def key(self) -> Tuple:
        return (self.x.key(), self.xi.key())


@dataclass(frozen=True, eq=False)
class SampledSymbol:
    """A symbol a(x, xi) on E sampled on a PhaseGrid"""

    grid: PhaseGrid
    values: np.ndarray
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.grid, RealGrid):
            object.__setattr__(self, "grid", PhaseGrid.from_real(self.grid))
        object.__setattr__(self, "values", _as_values(self.values, self.grid.shape, "SampledSymbol"))

    @classmethod
    def from_callable(cls, func: Callable[..., np.ndarray], grid: PhaseGrid,
                      label: Optional[str] = None) -> "SampledSymbol":
        vals = func(*grid.mesh())
        return cls(grid, np.broadcast_to(vals, grid.shape), label)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.quad_weight))

    def integral(self) -> complex:
        return complex(np.sum(self.values) * self.grid.quad_weight)

    def conj(self) -> "SampledSymbol":
        return SampledSymbol(self.grid, np.conj(self.values), self.label)

    def scaled(self, factor: complex) -> "SampledSymbol":
        return SampledSymbol(self.grid, factor * self.values, self.label)

    def __add__(self, other: "SampledSymbol") -> "SampledSymbol":
        if other.grid != self.grid:
            raise GridError("sum of symbols on different grids")
        return SampledSymbol(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledSymbol") -> "SampledSymbol":
        return self + other.scaled(-1.0)
