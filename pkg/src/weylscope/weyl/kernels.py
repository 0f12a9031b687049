"""
Weyl quantization through kernels.

    a^w u(x) = (2 pi)^{-1} int int exp(i (x - y) theta) a((x + y)/2, theta) u(y) dy dtheta

The kernel map U sends a symbol to K(x, y) = (F_2^{-1} a)((x + y)/2, x - y).
On a function grid with N nodes of spacing h the pairs (x_i, x_j) have
midpoints on a grid of spacing h/2 and differences d*h, so the symbol is
sampled on PhaseGrid.for_functions(grid): 2N midpoint nodes and 2N frequency
nodes of spacing pi/(2L) covering one period [-pi/h, pi/h). With that
choice:

    G[m, d] = h^{-1} (-1)^d ifft_k(a[m, :])[d mod 2N]
    K[i, j] = G[i + j, i - j]

which is exact (no interpolation) in the forward direction. The inverse
needs G at the midpoint indices m whose parity differs from d; those are
interpolated half a sample along the midpoint axis.

Design:
- KernelMatrix carries its function grid; applying it is entries @ u * h
- Composition is a dense product, # is kernel composition followed by U^{-1}
- Symbols that grow in xi are sampled with frequency_taper so that their
  kernels stay local; assertions about them are restricted to the interior
  half of both axes, where the taper is exactly one

Only n = 1 is implemented for the kernel map; the lattice norm on E = R^2
uses tensor products of one-dimensional kernels.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np
from scipy import fft as sfft
from scipy.special import erf

from ..core.errors import AliasingWarning, DimensionError, GridError, GrowthWarning
from ..core.grids import (
    EDGE_TOLERANCE,
    PhaseGrid,
    RealGrid,
    SampledFunction,
    SampledSymbol,
    edge_mass,
    warn_on_edge_mass,
)
from ..utils.fourier import fractional_shift, interpolation_matrix

MIDPOINT_METHODS = ("lagrange", "fourier")

# Largest function grid on which the midpoint shift defaults to "fourier"
FOURIER_MIDPOINT_LIMIT = 256

# One-sided width of the Lagrange stencil used for half-sample shifts
_STENCIL_HALF_WIDTH = 6

# Relative xi-edge mass above which a symbol is reported as aliased
ALIASING_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """
    Discretized operator kernel K(x_i, x_j) on a function grid.

    Attributes:
        grid: Function grid (dim 1)
        entries: N x N complex matrix
    """

    grid: RealGrid
    entries: np.ndarray

    def __post_init__(self) -> None:
        K = np.asarray(self.entries, dtype=complex)
        n = self.grid.size
        if K.shape != (n, n):
            raise DimensionError(f"kernel of shape {K.shape} on a grid of {n} nodes")
        if not np.all(np.isfinite(K)):
            raise GridError("kernel entries must be finite")
        K.setflags(write=False)
        object.__setattr__(self, "entries", K)

    @property
    def quad_weight(self) -> float:
        return self.grid.quad_weight

    def apply(self, u: SampledFunction) -> SampledFunction:
        if u.grid != self.grid:
            raise GridError("kernel and function live on different grids")
        return SampledFunction(self.grid, self.entries @ u.values.ravel() * self.quad_weight)

    def compose(self, other: "KernelMatrix") -> "KernelMatrix":
        """Kernel of (self o other)"""
        if other.grid != self.grid:
            raise GridError("cannot compose kernels on different grids")
        return KernelMatrix(self.grid, self.entries @ other.entries * self.quad_weight)

    def __matmul__(self, other: "KernelMatrix") -> "KernelMatrix":
        return self.compose(other)

    def adjoint(self) -> "KernelMatrix":
        return KernelMatrix(self.grid, self.entries.conj().T)

    def operator_matrix(self) -> np.ndarray:
        """Matrix acting on sample vectors (quadrature weight included)"""
        return self.entries * self.quad_weight

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Row-major CSV with a header describing the grid"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        g = self.grid
        with open(path, "w", newline="") as f:
            f.write(f"# dim={g.dim} half_width={g.half_width!r} points_per_axis={g.points_per_axis} "
                    f"quad_weight={g.quad_weight!r}\n")
            writer = csv.writer(f)
            writer.writerow(["i", "j", "x", "y", "re", "im"])
            ax = g.axis()
            for i in range(g.size):
                for j in range(g.size):
                    z = self.entries[i, j]
                    writer.writerow([i, j, repr(ax[i]), repr(ax[j]), repr(z.real), repr(z.imag)])
        return path


def weyl_grid(grid: RealGrid) -> PhaseGrid:
    """Quantization-compatible symbol grid for a function grid"""
    if grid.dim != 1:
        raise DimensionError(f"the kernel map is implemented for n = 1, got n = {grid.dim}")
    return PhaseGrid.for_functions(grid)


def frequency_taper(xi: np.ndarray, xi_max: float) -> np.ndarray:
    """
    Smooth cutoff equal to one (to 1e-9) on |xi| <= xi_max / 2 and
    negligible at |xi| = xi_max.
    """
    c = 0.75 * xi_max
    w = 0.05 * xi_max
    return 0.5 * (erf((c - xi) / w) + erf((c + xi) / w))


def sample_symbol(func: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: RealGrid,
                  label: Optional[str] = None, taper: bool = False) -> SampledSymbol:
    """
    Sample a(x, xi) on the symbol grid of a function grid.

    Args:
        func: Vectorized a(x, xi)
        grid: Function grid (dim 1)
        label: Optional name carried by the symbol
        taper: Multiply by frequency_taper (for symbols growing in xi)
    """
    pg = weyl_grid(grid)
    X, XI = pg.mesh()
    vals = np.broadcast_to(func(X, XI), pg.shape).astype(complex)
    if taper:
        vals = vals * frequency_taper(XI, pg.xi.half_width)
    return SampledSymbol(pg, vals, label)


def resample_symbol(a: SampledSymbol, target: PhaseGrid) -> SampledSymbol:
    """
    Band-limited resampling of a symbol onto another phase grid (n = 1).
    Target nodes outside the source box get zero.
    """
    if a.grid.n != 1 or target.n != 1:
        raise DimensionError("resampling is implemented for n = 1")
    if a.grid.key() == target.key():
        return a
    Mx = _interp_or_zero(a.grid.x.axis(), target.x.axis(), a.grid.x.half_width)
    Mxi = _interp_or_zero(a.grid.xi.axis(), target.xi.axis(), a.grid.xi.half_width)
    return SampledSymbol(target, Mx @ a.values @ Mxi.T, a.label)


def _interp_or_zero(nodes: np.ndarray, points: np.ndarray, half_width: float) -> np.ndarray:
    M = interpolation_matrix(nodes, points)
    outside = (points < -half_width) | (points > half_width - (nodes[1] - nodes[0]))
    M[outside, :] = 0.0
    return M


def symbol_to_kernel(a: SampledSymbol) -> KernelMatrix:
    """
    Weyl kernel of a symbol sampled on PhaseGrid.for_functions(grid).

    Raises:
        GridError: If the symbol grid is not quantization-compatible

    Warns:
        AliasingWarning: If the symbol has mass on the xi boundary
    """
    grid = a.grid.function_grid()
    if grid.dim != 1:
        raise DimensionError("the kernel map is implemented for n = 1")
    N = grid.points_per_axis
    h = grid.spacing
    vals = a.values
    xi_edge = max(float(np.abs(vals[:, 0]).max()), float(np.abs(vals[:, -1]).max()))
    peak = float(np.abs(vals).max())
    if peak > 0 and xi_edge > ALIASING_TOLERANCE * peak:
        warnings.warn(
            f"symbol {a.label or ''} has relative mass {xi_edge / peak:.2e} on the frequency boundary",
            AliasingWarning,
            stacklevel=2,
        )
    M = 2 * N
    signs = np.where(np.arange(M) % 2 == 0, 1.0, -1.0)
    G = sfft.ifft(vals, axis=1) * signs[None, :] / h
    i = np.arange(N)
    I, J = np.meshgrid(i, i, indexing="ij")
    return KernelMatrix(grid, G[I + J, (I - J) % M])


def _lagrange_weights(direction: int) -> tuple[np.ndarray, np.ndarray]:
    p = _STENCIL_HALF_WIDTH
    if direction > 0:
        offsets = np.arange(-p + 1, p + 1)
        target = 0.5
    else:
        offsets = np.arange(-p, p)
        target = -0.5
    w = np.ones(len(offsets))
    for k, ok in enumerate(offsets):
        for l, ol in enumerate(offsets):
            if l != k:
                w[k] *= (target - ol) / (ok - ol)
    return offsets, w


def _half_shift(V: np.ndarray, direction: int, method: str) -> np.ndarray:
    """Values half a sample forward (direction=+1) or backward along axis 1"""
    if method == "fourier":
        return fractional_shift(V, 0.5 * direction, 1.0, axis=1)
    offsets, w = _lagrange_weights(direction)
    p = _STENCIL_HALF_WIDTH
    n = V.shape[1]
    Vp = np.pad(V, ((0, 0), (p, p)))
    out = np.zeros_like(V)
    for o, wk in zip(offsets, w):
        out += wk * Vp[:, p + o:p + o + n]
    return out


def default_midpoint(grid: RealGrid) -> str:
    """'fourier' up to FOURIER_MIDPOINT_LIMIT function nodes, 'lagrange' beyond"""
    return "fourier" if grid.points_per_axis <= FOURIER_MIDPOINT_LIMIT else "lagrange"


def kernel_to_symbol(K: KernelMatrix, midpoint: Optional[str] = None) -> SampledSymbol:
    """
    Weyl symbol of a kernel: a(t, tau) = int exp(-i tau s) K(t + s/2, t - s/2) ds.

    Args:
        K: Kernel on a function grid (dim 1)
        midpoint: 'fourier' (periodic band-limited shift) or 'lagrange'
            (12-point stencil, exact on polynomials of degree < 12); None
            picks default_midpoint(K.grid). Kernels that do not decay along
            the anti-diagonals need 'lagrange'

    Warns:
        BoundaryMassWarning: If K has mass on the grid edge
    """
    if midpoint is None:
        midpoint = default_midpoint(K.grid)
    if midpoint not in MIDPOINT_METHODS:
        raise ValueError(f"midpoint must be one of {MIDPOINT_METHODS}, got {midpoint!r}")
    grid = K.grid
    if grid.dim != 1:
        raise DimensionError("the kernel map is implemented for n = 1")
    warn_on_edge_mass(K.entries, "kernel_to_symbol input")
    N = grid.points_per_axis
    h = grid.spacing
    M = 2 * N
    ds = np.arange(-N, N)
    G = np.zeros((M, M), dtype=complex)
    for parity in (0, 1):
        dsel = ds[ds % 2 == parity]
        ms = parity + 2 * np.arange(N)
        I = (ms[None, :] + dsel[:, None]) // 2
        J = (ms[None, :] - dsel[:, None]) // 2
        valid = (I >= 0) & (I < N) & (J >= 0) & (J < N)
        V = np.zeros(I.shape, dtype=complex)
        V[valid] = K.entries[I[valid], J[valid]]
        direction = 1 if parity == 0 else -1
        W = _half_shift(V, direction, midpoint)
        cols = dsel % M
        G[ms[:, None], cols[None, :]] = V.T
        G[(ms + direction)[:, None], cols[None, :]] = W.T
    signs = np.where(np.arange(M) % 2 == 0, 1.0, -1.0)
    vals = h * sfft.fft(G * signs[None, :], axis=1)
    return SampledSymbol(PhaseGrid.for_functions(grid), vals)


def apply_weyl(a: SampledSymbol, u: SampledFunction) -> SampledFunction:
    """a^w u through the kernel of a"""
    K = symbol_to_kernel(a)
    return K.apply(u)


def moyal_compose(a1: SampledSymbol, a2: SampledSymbol, midpoint: Optional[str] = None) -> SampledSymbol:
    """
    a1 # a2: symbol of a1^w o a2^w by kernel composition and U^{-1}.

    The midpoint shift defaults to default_midpoint, except that inputs
    unbounded on their grid use 'lagrange': their kernels do not decay
    along the anti-diagonals and a periodic shift would ring.

    Warns:
        GrowthWarning: If an input is unbounded on its grid and the composed
            kernel has edge mass
    """
    if a1.grid.key() != a2.grid.key():
        raise GridError("both symbols must live on the same grid")
    unbounded = _grows(a1) or _grows(a2)
    if midpoint is None and unbounded:
        midpoint = "lagrange"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasingWarning)
        K1 = symbol_to_kernel(a1)
        K2 = symbol_to_kernel(a2)
    K = K1 @ K2
    if edge_mass(K.entries) > EDGE_TOLERANCE and unbounded:
        warnings.warn(
            f"composition of unbounded symbols {a1.label or '?'} # {a2.label or '?'} "
            "leaves mass on the kernel edge; trust the interior half only",
            GrowthWarning,
            stacklevel=2,
        )
    out = kernel_to_symbol(K, midpoint=midpoint)
    label = f"{a1.label}#{a2.label}" if a1.label and a2.label else None
    return SampledSymbol(out.grid, out.values, label)


def _grows(a: SampledSymbol) -> bool:
    """True when |a| on the outer x faces is comparable to its maximum"""
    vals = np.abs(a.values)
    peak = float(vals.max())
    if peak == 0.0:
        return False
    edge = max(float(vals[0, :].max()), float(vals[-1, :].max()))
    return edge > 0.5 * peak


def weyl_adjoint_kernel(a: SampledSymbol) -> KernelMatrix:
    """Kernel of (conj a)^w, which equals the conjugate transpose of K_a"""
    return symbol_to_kernel(a.conj())
