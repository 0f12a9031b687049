"""
Gaussian short-time Fourier transform of symbols and the S~(m) norm

    V(T, Xi) = F(f_T a)(Xi) = int exp(-i Y.Xi) f_T(Y) a(Y) dY
    ||a||_{S~(m)} = sup_{T, Xi} |V(T, Xi)| / m(T, Xi)

Design:
- T runs over a symmetric subset of the symbol grid: node N/2 + k*stride on
  every axis with |k*stride| < N/2 (so -T is tabulated whenever T is), or over
  an explicit list of points
- Xi runs over the dual grid of the centred DFT, optionally refined by
  zero padding (xi_refine)
- T batches are transformed together by scipy.fft with a worker count; each
  T is independent, so the batch size never changes the result
- The norm comes with the location of its maximum (NormResult) so that a
  failing comparison can be traced back to a point of E x E*
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import BoundaryMassWarning, DimensionError, GridError
from ..core.grids import PhaseGrid, RealGrid, SampledSymbol
from ..core.order_functions import OrderFunction
from ..utils.fourier import centered_fft, nonuniform_dft_matrix
from .windows import f0_values

# Relative mass of f_T a on the grid edge above which a table is flagged
STFT_EDGE_TOLERANCE = 1e-8

DEFAULT_STRIDE = 4

# T nodes transformed per FFT batch
_T_BATCH = 32


@dataclass(frozen=True, eq=False)
class STFTTable:
    """
    Tabulated F(f_T a)(Xi), phases retained.

    Attributes:
        T_points: (K, 2n) array of window centers
        Xi_grid: Frequency grid (dim 2n)
        values: (K,) + Xi_grid.shape complex array
        boundary_flag: Some f_T a had mass on the grid edge
        stride: T decimation used (None for explicit T lists)
    """

    T_points: np.ndarray
    Xi_grid: RealGrid
    values: np.ndarray
    boundary_flag: bool = False
    stride: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.T_points),) + self.Xi_grid.shape:
            raise DimensionError("STFT values do not match the T list and Xi grid")
        if not np.all(np.isfinite(self.values)):
            raise GridError("STFT values must be finite")

    @property
    def dim(self) -> int:
        return self.Xi_grid.dim

    def xi_points(self) -> np.ndarray:
        return self.Xi_grid.points()

    def ratio(self, m: OrderFunction) -> np.ndarray:
        """|V(T, Xi)| / m(T, Xi), same shape as values"""
        if m.ambient_dim != 2 * self.dim:
            raise DimensionError(f"order function on dimension {m.ambient_dim}, table needs {2 * self.dim}")
        xi = self.xi_points()
        out = np.empty(self.values.shape)
        for k, T in enumerate(self.T_points):
            TX = np.concatenate([np.broadcast_to(T, xi.shape), xi], axis=-1)
            out[k] = (np.abs(self.values[k]).ravel() / m(TX)).reshape(self.Xi_grid.shape)
        return out


@dataclass(frozen=True)
class NormResult:
    """An S~(m) norm with the location of the maximum"""

    value: float
    T: Tuple[float, ...]
    Xi: Tuple[float, ...]
    boundary_flag: bool = False


def square_grid(a: SampledSymbol) -> RealGrid:
    pg: PhaseGrid = a.grid
    if not pg.is_square:
        raise GridError("the STFT needs a square phase grid (same x and xi factors)")
    return RealGrid(pg.dim, pg.x.half_width, pg.x.points_per_axis)


def _parse_stride(stride: Union[int, Sequence[int]], dim: int) -> Tuple[int, ...]:
    if np.ndim(stride) == 0:
        stride = (int(stride),) * dim
    stride = tuple(int(s) for s in stride)
    if len(stride) != dim or min(stride) < 1:
        raise ValueError(f"stride must be a positive integer or one per axis, got {stride}")
    return stride


def t_nodes(grid: RealGrid, stride: Union[int, Sequence[int]] = DEFAULT_STRIDE) -> np.ndarray:
    """Symmetric decimated window centers: N/2 + k*stride, |k*stride| < N/2 per axis"""
    stride = _parse_stride(stride, grid.dim)
    ax = grid.axis()
    c = grid.center_index
    per_axis = []
    for s in stride:
        K = (c - 1) // s
        per_axis.append(ax[c + s * np.arange(-K, K + 1)])
    mesh = np.meshgrid(*per_axis, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def stft(a: SampledSymbol, stride: Union[int, Sequence[int]] = DEFAULT_STRIDE,
         T_points: Optional[np.ndarray] = None, xi_refine: int = 1,
         workers: Optional[int] = None, warn: bool = True) -> STFTTable:
    """
    Tabulate F(f_T a)(Xi).

    Args:
        a: Symbol on a square phase grid
        stride: T decimation per axis (ignored when T_points is given)
        T_points: Explicit (K, 2n) window centers
        xi_refine: Zero-padding factor for the Xi grid (1 = plain dual grid)
        workers: scipy.fft worker count
        warn: Issue BoundaryMassWarning when the table is flagged

    Returns:
        STFTTable
    """
    grid = square_grid(a)
    if xi_refine < 1 or int(xi_refine) != xi_refine:
        raise ValueError(f"xi_refine must be a positive integer, got {xi_refine}")
    xi_refine = int(xi_refine)
    if T_points is None:
        T = t_nodes(grid, stride)
        used_stride = _parse_stride(stride, grid.dim)
    else:
        T = np.atleast_2d(np.asarray(T_points, dtype=float))
        used_stride = None
        if T.shape[-1] != grid.dim:
            raise DimensionError(f"T points need dimension {grid.dim}, got {T.shape[-1]}")
    Y = np.stack(grid.mesh(), axis=-1)
    axes = tuple(range(1, grid.dim + 1))
    N = grid.points_per_axis
    pad = N * (xi_refine - 1) // 2
    padded = RealGrid(grid.dim, grid.half_width * xi_refine, N * xi_refine)
    xi_grid = padded.dual()
    values = np.empty((len(T),) + xi_grid.shape, dtype=complex)
    flagged = False
    for start in range(0, len(T), _T_BATCH):
        batch = T[start:start + _T_BATCH]
        prod = np.stack([f0_values(Y, t) for t in batch]) * a.values[None, ...]
        flagged |= _edge_flag(prod)
        if pad:
            prod = np.pad(prod, [(0, 0)] + [(pad, pad)] * grid.dim)
        values[start:start + len(batch)] = centered_fft(prod, grid.spacing, axes, workers=workers)
    if flagged and warn:
        warnings.warn(
            f"f_T a has relative edge mass above {STFT_EDGE_TOLERANCE:.0e} for some T; "
            "the STFT table is unreliable there",
            BoundaryMassWarning,
            stacklevel=2,
        )
    return STFTTable(T, xi_grid, values, flagged, used_stride)


def _edge_flag(prod: np.ndarray) -> bool:
    mod = np.abs(prod)
    spatial = tuple(range(1, mod.ndim))
    peak = mod.max(axis=spatial)
    edge = np.zeros_like(peak)
    for ax in spatial:
        edge = np.maximum(edge, np.take(mod, 0, axis=ax).max(axis=tuple(range(1, mod.ndim - 1))))
        edge = np.maximum(edge, np.take(mod, -1, axis=ax).max(axis=tuple(range(1, mod.ndim - 1))))
    live = peak > 0
    return bool(np.any(edge[live] > STFT_EDGE_TOLERANCE * peak[live]))


def locate_stilde_norm(a: SampledSymbol, m: OrderFunction, table: Optional[STFTTable] = None,
                       **stft_options) -> NormResult:
    """
    max over the table of |F(f_T a)(Xi)| / m(T, Xi), with its location.

    Args:
        a: Symbol
        m: Order function on E x E*
        table: Precomputed stft(a); computed with stft_options otherwise
    """
    table = stft(a, **stft_options) if table is None else table
    ratio = table.ratio(m)
    k = int(np.argmax(ratio))
    t_idx, xi_flat = np.unravel_index(k, (len(table.T_points), int(np.prod(table.Xi_grid.shape))))
    Xi = table.xi_points()[xi_flat]
    return NormResult(
        float(ratio.ravel()[k]),
        tuple(float(v) for v in table.T_points[t_idx]),
        tuple(float(v) for v in Xi),
        table.boundary_flag,
    )


def stilde_norm(a: SampledSymbol, m: OrderFunction, table: Optional[STFTTable] = None,
                **stft_options) -> float:
    """S~(m) norm of a by the Gaussian STFT criterion"""
    return locate_stilde_norm(a, m, table, **stft_options).value


def dense_stilde_norm(a: SampledSymbol, m: OrderFunction, T_points: np.ndarray,
                      Xi_points: np.ndarray) -> float:
    """
    Brute-force sup of |F(f_T a)(Xi)| / m(T, Xi) by direct quadrature (no FFT),
    for independent checks on arbitrary (T, Xi) sets. n = 1 only.
    """
    grid = square_grid(a)
    if grid.dim != 2:
        raise DimensionError("dense_stilde_norm is implemented for n = 1")
    ax = grid.axis()
    h = grid.spacing
    Y = np.stack(grid.mesh(), axis=-1)
    Xi_points = np.atleast_2d(np.asarray(Xi_points, dtype=float))
    E1 = nonuniform_dft_matrix(ax, Xi_points[:, 0], h)
    E2 = nonuniform_dft_matrix(ax, Xi_points[:, 1], h)
    best = 0.0
    for T in np.atleast_2d(np.asarray(T_points, dtype=float)):
        prod = f0_values(Y, T) * a.values
        vals = np.einsum("kj,jl,kl->k", E1, prod, E2)
        TX = np.concatenate([np.broadcast_to(T, Xi_points.shape), Xi_points], axis=-1)
        best = max(best, float(np.max(np.abs(vals) / m(TX))))
    return best


def export_stft_csv(table: STFTTable, m: OrderFunction, path: Union[str, Path]) -> Path:
    """
    CSV with columns T1..T2n, Xi1..Xi2n, re, im, modulus, m, ratio.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    d = table.dim
    xi = table.xi_points()
    ratio = table.ratio(m)
    header = [f"T{k + 1}" for k in range(d)] + [f"Xi{k + 1}" for k in range(d)] + \
        ["re", "im", "modulus", "m", "ratio"]
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for k, T in enumerate(table.T_points):
            vals = table.values[k].ravel()
            rat = ratio[k].ravel()
            mvals = m(np.concatenate([np.broadcast_to(T, xi.shape), xi], axis=-1))
            for j in range(len(xi)):
                z = vals[j]
                mod = abs(z)
                writer.writerow(
                    [repr(float(t)) for t in T] + [repr(float(s)) for s in xi[j]]
                    + [repr(z.real), repr(z.imag), repr(mod), repr(float(mvals[j])), repr(float(rat[j]))]
                )
    return path
