"""
Metaplectic FBI-Bargmann transforms with quadratic phases.

    T u(x) = C_phi int exp(i phi(x, y)) u(y) dy,    x in C^n

T u is evaluated by the trapezoid rule over a real grid, at the nodes of a
box in C^n (ComplexGrid) or at arbitrary complex points. All integrals over
C^n are trapezoid rules over the box in (Re x, Im x) against exp(-2 Phi).

Design:
- C_phi is calibrated once per (phase, function grid, complex grid) by
  ||T e_0||_{H^2_Phi} = ||e_0|| and cached; get_cache_stats() reports hits
- a_Phi (reproducing kernel constant) is calibrated by least squares on
  Pi_Phi(T e_0) = T e_0 over the inner half of the box, in the same cache
- Kernels that grow like exp(Phi) are always combined with exp(-Phi) of
  their arguments before summation, so weighted sums never overflow
- Node loops are processed in fixed-size row chunks; the order of summation
  inside a chunk is the one of the matrix product, fixed per run
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from ..core.errors import DimensionError, GridError, SingularFormError
from ..core.grids import RealGrid, SampledFunction, warn_on_edge_mass
from ..stft.windows import ground_state
from ..weyl.schur import parse_p
from .phases import (
    QuadraticPhase,
    Weight,
    bergman_constant,
    change_kernel_form,
    phi_weight,
)

# Rows of complex nodes handled per dense block
_ROW_CHUNK = 512

# Fraction of the box used to calibrate a_Phi
_CALIBRATION_FRACTION = 0.5


@dataclass(frozen=True)
class ComplexGrid:
    """
    Box in C^n tiled by a real grid for Re x and one for Im x.

    Attributes:
        re: Grid of the real parts (dim n)
        im: Grid of the imaginary parts (dim n)
    """

    re: RealGrid
    im: RealGrid

    def __post_init__(self) -> None:
        if self.re.dim != self.im.dim:
            raise GridError(f"real and imaginary grids differ in dimension: {self.re.dim} vs {self.im.dim}")

    @classmethod
    def square(cls, n: int = 1, half_width: float = 8.0, points_per_axis: int = 64) -> "ComplexGrid":
        g = RealGrid(n, half_width, points_per_axis)
        return cls(g, g)

    @property
    def n(self) -> int:
        return self.re.dim

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.re.shape + self.im.shape

    @property
    def size(self) -> int:
        return self.re.size * self.im.size

    @property
    def quad_weight(self) -> float:
        return self.re.quad_weight * self.im.quad_weight

    def nodes(self) -> np.ndarray:
        """Complex nodes of shape self.shape + (n,)"""
        n = self.n
        axes = (self.re.axis(),) * n + (self.im.axis(),) * n
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh[:n], axis=-1) + 1j * np.stack(mesh[n:], axis=-1)

    def flat_nodes(self) -> np.ndarray:
        return self.nodes().reshape(-1, self.n)

    def refine(self, factor: int = 2) -> "ComplexGrid":
        return ComplexGrid(self.re.refine(factor), self.im.refine(factor))

    def key(self) -> Tuple:
        return (self.re.key(), self.im.key())


DEFAULT_FUNCTION_GRID = RealGrid(1, 8.0, 128)
DEFAULT_COMPLEX_GRID = ComplexGrid.square(1, 8.0, 64)


@dataclass(frozen=True, eq=False)
class ComplexGridFunction:
    """Values of a function on C^n at the nodes of a ComplexGrid"""

    grid: ComplexGrid
    values: np.ndarray
    label: Optional[str] = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=complex)
        if arr.size != self.grid.size:
            raise DimensionError(f"ComplexGridFunction: expected {self.grid.size} values, got {arr.size}")
        arr = arr.reshape(self.grid.shape)
        if not np.all(np.isfinite(arr)):
            raise GridError("ComplexGridFunction: values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def re_grid(self) -> RealGrid:
        return self.grid.re

    @property
    def im_grid(self) -> RealGrid:
        return self.grid.im

    def weighted(self, W: Weight) -> np.ndarray:
        """|V| exp(-Phi) at the nodes"""
        return np.abs(self.values) * np.exp(-W(self.grid.nodes()))

    def inner(self, other: "ComplexGridFunction", W: Weight) -> complex:
        """(V, U) in H^2_Phi: sum V conj(U) exp(-2 Phi) dL"""
        if other.grid != self.grid:
            raise GridError("inner product of functions on different complex grids")
        damp = np.exp(-W(self.grid.nodes()))
        return complex(np.sum(self.values * damp * np.conj(other.values * damp)) * self.grid.quad_weight)

    def scaled(self, factor: complex) -> "ComplexGridFunction":
        return ComplexGridFunction(self.grid, factor * self.values, self.label)

    def __add__(self, other: "ComplexGridFunction") -> "ComplexGridFunction":
        if other.grid != self.grid:
            raise GridError("sum of functions on different complex grids")
        return ComplexGridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "ComplexGridFunction") -> "ComplexGridFunction":
        return self + other.scaled(-1.0)

    def to_csv(self, path: Union[str, Path], W: Optional[Weight] = None) -> Path:
        """
        Columns re_x.., im_x.., re_val, im_val, weighted_modulus (empty
        without a weight). Floats are written with repr.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        n = self.grid.n
        z = self.grid.flat_nodes()
        vals = self.values.ravel()
        mod = np.abs(vals) * np.exp(-W(z)) if W is not None else None
        header = [f"re_x{k}" for k in range(n)] + [f"im_x{k}" for k in range(n)]
        header += ["re_val", "im_val", "weighted_modulus"]
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for idx in range(len(vals)):
                row = [repr(float(v)) for v in z[idx].real] + [repr(float(v)) for v in z[idx].imag]
                row += [repr(float(vals[idx].real)), repr(float(vals[idx].imag))]
                row.append(repr(float(mod[idx])) if mod is not None else "")
                writer.writerow(row)
        return path


# Calibration cache
_constant_cache: Dict[Tuple, float] = {}
_cache_stats = {'hits': 0, 'misses': 0}


def clear_cache():
    """Clear the calibration cache"""
    global _constant_cache, _cache_stats
    _constant_cache.clear()
    _cache_stats = {'hits': 0, 'misses': 0}


def get_cache_stats() -> Dict[str, int]:
    """
    Get calibration cache statistics.

    Returns:
        Dict with 'hits', 'misses', 'size'
    """
    return {
        'hits': _cache_stats['hits'],
        'misses': _cache_stats['misses'],
        'size': len(_constant_cache),
    }


def _check_dims(phi: QuadraticPhase, function_grid: RealGrid, grid: Optional[ComplexGrid] = None) -> None:
    if function_grid.dim != phi.n:
        raise DimensionError(f"phase has n = {phi.n}, function grid has dim {function_grid.dim}")
    if grid is not None and grid.n != phi.n:
        raise DimensionError(f"phase has n = {phi.n}, complex grid has n = {grid.n}")


def _transform_at(u: SampledFunction, phi: QuadraticPhase, points: np.ndarray) -> np.ndarray:
    """sum_j exp(i phi(z, y_j)) u_j h^n (no constant) at complex points (..., n)"""
    _check_dims(phi, u.grid)
    pts = np.asarray(points, dtype=complex)
    if pts.shape[-1] != phi.n:
        raise DimensionError(f"complex points need a last axis of length {phi.n}, got {pts.shape}")
    shape = pts.shape[:-1]
    flat = pts.reshape(-1, phi.n)
    y = u.grid.points()
    uv = u.values.ravel()
    out = np.empty(len(flat), dtype=complex)
    for start in range(0, len(flat), _ROW_CHUNK):
        block = flat[start:start + _ROW_CHUNK]
        out[start:start + len(block)] = np.exp(1j * phi(block[:, None, :], y[None, :, :])) @ uv
    return out.reshape(shape) * u.grid.quad_weight


def _ground_state_sample(grid: RealGrid) -> SampledFunction:
    return SampledFunction(grid, ground_state(grid.points()))


def transform_constant(phi: QuadraticPhase, function_grid: RealGrid = DEFAULT_FUNCTION_GRID,
                       grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> float:
    """
    C_phi, calibrated by ||T e_0||_{H^2_Phi} = ||e_0|| on the given grids.

    Raises:
        SingularFormError: If the calibration norm vanishes or is not finite
    """
    key = ("C", phi.key(), function_grid.key(), grid.key())
    if key in _constant_cache:
        _cache_stats['hits'] += 1
        return _constant_cache[key]
    _cache_stats['misses'] += 1
    _check_dims(phi, function_grid, grid)
    e0 = _ground_state_sample(function_grid)
    W = phi_weight(phi)
    z = grid.nodes()
    raw = _transform_at(e0, phi, z)
    weighted = np.abs(raw) * np.exp(-W(z))
    norm = float(np.sqrt(np.sum(weighted ** 2) * grid.quad_weight))
    if not np.isfinite(norm) or norm == 0.0:
        raise SingularFormError("cannot calibrate the transform constant", phi.label)
    value = e0.norm() / norm
    _constant_cache[key] = value
    return value


def bargmann_transform(u: SampledFunction, phi: QuadraticPhase,
                       grid: ComplexGrid = DEFAULT_COMPLEX_GRID, warn: bool = True) -> ComplexGridFunction:
    """
    T u at the nodes of a complex grid.

    Args:
        u: Function on a real grid (dim n)
        phi: Quadratic phase
        grid: Target box in C^n
        warn: Issue a BoundaryMassWarning when u has mass at the grid edge

    Returns:
        ComplexGridFunction with the values of T u
    """
    if warn:
        warn_on_edge_mass(u.values, "bargmann_transform input")
    C = transform_constant(phi, u.grid, grid)
    return ComplexGridFunction(grid, C * _transform_at(u, phi, grid.nodes()), f"T[{phi.label}]")


def bargmann_evaluate(u: SampledFunction, phi: QuadraticPhase, points,
                      grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> np.ndarray:
    """T u at arbitrary complex points (..., n); grid selects the calibration"""
    return transform_constant(phi, u.grid, grid) * _transform_at(u, phi, points)


def bargmann_adjoint(V: ComplexGridFunction, phi: QuadraticPhase,
                     function_grid: RealGrid = DEFAULT_FUNCTION_GRID, warn: bool = True) -> SampledFunction:
    """
    T^* V(y) = C_phi int exp(-i conj(phi(w, y))) V(w) exp(-2 Phi(w)) L(dw).

    Warns:
        BoundaryMassWarning: If |V| exp(-Phi) has mass at the edge of the box
    """
    _check_dims(phi, function_grid, V.grid)
    W = phi_weight(phi)
    z = V.grid.flat_nodes()
    damp = np.exp(-W(z))
    wv = V.values.ravel() * damp
    if warn:
        warn_on_edge_mass(wv.reshape(V.grid.shape), "bargmann_adjoint input")
    y = function_grid.points()
    out = np.zeros(len(y), dtype=complex)
    for start in range(0, len(z), _ROW_CHUNK):
        zc = z[start:start + _ROW_CHUNK]
        E = np.exp(1j * phi(zc[:, None, :], y[None, :, :])) * damp[start:start + len(zc), None]
        out += np.conj(E).T @ wv[start:start + len(zc)]
    C = transform_constant(phi, function_grid, V.grid)
    return SampledFunction(function_grid, C * out * V.grid.quad_weight)


def hp_norm(V: ComplexGridFunction, W: Weight, p: Union[int, float, str] = 2, warn: bool = True) -> float:
    """
    ||V||_{H^p_Phi}: (int |V|^p exp(-p Phi))^{1/p}, or max |V| exp(-Phi) for p = inf.

    Warns:
        BoundaryMassWarning: For p < inf, when the weighted integrand has mass at the edge
    """
    p = parse_p(p)
    w = V.weighted(W)
    if p == np.inf:
        return float(w.max())
    integrand = w ** p
    if warn:
        warn_on_edge_mass(integrand, "hp_norm integrand")
    return float((np.sum(integrand) * V.grid.quad_weight) ** (1.0 / p))


def mod_norm(u: SampledFunction, p: Union[int, float, str], phi: QuadraticPhase,
             grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> float:
    """M^p norm of u: the H^p_Phi norm of T u"""
    return hp_norm(bargmann_transform(u, phi, grid), phi_weight(phi), p)


# Reproducing kernel

def _projection_weighted(values: np.ndarray, grid: ComplexGrid, W: Weight,
                         targets: np.ndarray) -> np.ndarray:
    """(Pi g)(x) exp(-Phi(x)) / a_Phi at the target points"""
    z = grid.flat_nodes()
    phi_z = W(z)
    gw = values.ravel() * np.exp(-phi_z)
    wbar = np.conj(z)[None, :, :]
    out = np.empty(len(targets), dtype=complex)
    for start in range(0, len(targets), _ROW_CHUNK):
        xc = targets[start:start + _ROW_CHUNK]
        expo = 2.0 * W.psi(xc[:, None, :], wbar) - W(xc)[:, None] - phi_z[None, :]
        out[start:start + len(xc)] = np.exp(expo) @ gw
    return out * grid.quad_weight


def reproducing_constant(phi: QuadraticPhase, function_grid: RealGrid = DEFAULT_FUNCTION_GRID,
                         grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> float:
    """a_Phi from Pi_Phi(T e_0) = T e_0 in least squares over the inner part of the box"""
    key = ("aPhi", phi.key(), function_grid.key(), grid.key())
    if key in _constant_cache:
        _cache_stats['hits'] += 1
        return _constant_cache[key]
    _cache_stats['misses'] += 1
    W = phi_weight(phi)
    V0 = bargmann_transform(_ground_state_sample(function_grid), phi, grid, warn=False)
    z = grid.flat_nodes()
    reach = _CALIBRATION_FRACTION * min(grid.re.half_width, grid.im.half_width)
    mask = np.all((np.abs(z.real) <= reach) & (np.abs(z.imag) <= reach), axis=-1)
    raw = _projection_weighted(V0.values, grid, W, z[mask])
    target = V0.values.ravel()[mask] * np.exp(-W(z[mask]))
    denom = float(np.vdot(raw, raw).real)
    if denom == 0.0:
        raise SingularFormError("cannot calibrate the reproducing constant", phi.label)
    value = float(np.vdot(raw, target).real / denom)
    _constant_cache[key] = value
    return value


def calibrated_weight(phi: QuadraticPhase, function_grid: RealGrid = DEFAULT_FUNCTION_GRID,
                      grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> Weight:
    """phi_weight(phi) carrying the calibrated a_Phi"""
    return phi_weight(phi).with_constant(reproducing_constant(phi, function_grid, grid))


def reproducing_projection(g: ComplexGridFunction, W: Weight, warn: bool = True) -> ComplexGridFunction:
    """
    Pi_Phi g(x) = a_Phi int exp(2 Psi(x, conj y)) g(y) exp(-2 Phi(y)) L(dy).

    Uses W.aPhi when calibrated and the closed-form Bergman constant otherwise.

    Warns:
        BoundaryMassWarning: If |g| exp(-Phi) has mass at the edge of the box
    """
    if g.grid.n != W.n:
        raise DimensionError(f"weight has n = {W.n}, grid has n = {g.grid.n}")
    if warn:
        warn_on_edge_mass(g.weighted(W), "reproducing_projection input")
    a = W.aPhi if W.aPhi is not None else bergman_constant(W)
    z = g.grid.flat_nodes()
    out = a * _projection_weighted(g.values, g.grid, W, z) * np.exp(W(z))
    return ComplexGridFunction(g.grid, out, g.label)


# Change of transform

def change_of_transform(V: ComplexGridFunction, phi1: QuadraticPhase, phi2: QuadraticPhase,
                        grid: Optional[ComplexGrid] = None,
                        function_grid: RealGrid = DEFAULT_FUNCTION_GRID, warn: bool = True) -> ComplexGridFunction:
    """
    T_2 T_1^* V through its kernel c exp(2 q(x, conj w)), q by exact stationary phase.

    Args:
        V: A function in H_{Phi_1} on a complex grid
        phi1: Phase of the transform V came from
        phi2: Target phase
        grid: Output grid (defaults to the grid of V)
        function_grid: Real grid the transform constants were calibrated on

    Raises:
        SingularFormError: If the stationary point in y is degenerate
    """
    grid = grid or V.grid
    W1, W2 = phi_weight(phi1), phi_weight(phi2)
    q, gauss = change_kernel_form(phi1, phi2)
    c = transform_constant(phi1, function_grid, V.grid) * transform_constant(phi2, function_grid, grid) * gauss
    w = V.grid.flat_nodes()
    phi_w = W1(w)
    vw = V.values.ravel() * np.exp(-phi_w)
    if warn:
        warn_on_edge_mass(vw.reshape(V.grid.shape), "change_of_transform input")
    wbar = np.conj(w)[None, :, :]
    x = grid.flat_nodes()
    out = np.empty(len(x), dtype=complex)
    for start in range(0, len(x), _ROW_CHUNK):
        xc = x[start:start + _ROW_CHUNK]
        expo = 2.0 * q(x=np.broadcast_to(xc[:, None, :], (len(xc), len(w), phi1.n)), wbar=wbar)
        expo = expo - W2(xc)[:, None] - phi_w[None, :]
        out[start:start + len(xc)] = np.exp(expo) @ vw
    out = c * out * V.grid.quad_weight * np.exp(W2(x))
    return ComplexGridFunction(grid, out, f"T[{phi2.label}]")


@dataclass(frozen=True)
class RatioBracket:
    """Range of ||T_2 u|| / ||T_1 u|| over a batch, for one exponent"""

    p: float
    low: float
    high: float

    @property
    def constant(self) -> float:
        """Smallest C with the ratios inside [1/C, C]"""
        return max(self.high, 1.0 / self.low)


def norm_ratio_bracket(functions: Iterable[SampledFunction], phi1: QuadraticPhase, phi2: QuadraticPhase,
                       p: Union[int, float, str], grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> RatioBracket:
    """M^p norms of a batch under two phases, as a ratio bracket"""
    p = parse_p(p)
    W1, W2 = phi_weight(phi1), phi_weight(phi2)
    ratios: List[float] = []
    for u in functions:
        n1 = hp_norm(bargmann_transform(u, phi1, grid), W1, p)
        n2 = hp_norm(bargmann_transform(u, phi2, grid), W2, p)
        ratios.append(n2 / n1)
    if not ratios:
        raise ValueError("empty function batch")
    return RatioBracket(p, float(min(ratios)), float(max(ratios)))


# Related transforms

def conjugate_transform(u: SampledFunction, phi: QuadraticPhase,
                        grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> ComplexGridFunction:
    """T~ u(x) = conj(T(conj u)(conj x)); lies in H_{Phi~} with Phi~(x) = Phi(conj x)"""
    ubar = SampledFunction(u.grid, np.conj(u.values))
    z = grid.nodes()
    vals = np.conj(bargmann_evaluate(ubar, phi, np.conj(z), grid))
    return ComplexGridFunction(grid, vals, f"T~[{phi.label}]")


def unitary_fourier(u: SampledFunction) -> SampledFunction:
    """F_0 u(xi) = (2 pi)^{-1/2} int exp(-i x xi) u(x) dx on the grid of u (n = 1)"""
    if u.grid.dim != 1:
        raise DimensionError("unitary_fourier is implemented for n = 1")
    x = u.grid.axis()
    F = np.exp(-1j * np.multiply.outer(x, x)) * u.grid.spacing / np.sqrt(2.0 * np.pi)
    return SampledFunction(u.grid, F @ u.values)


def rotation_pullback(V: ComplexGridFunction) -> ComplexGridFunction:
    """
    R V(x) = V(-i x) on a square grid (n = 1). The node a + ib maps to
    b - ia; the row a = -L has no preimage node and is set to zero.
    """
    if V.grid.n != 1 or V.grid.re != V.grid.im:
        raise GridError("rotation_pullback needs a square complex grid with n = 1")
    N = V.grid.re.points_per_axis
    out = np.zeros((N, N), dtype=complex)
    src = V.values
    for i in range(1, N):
        out[i, :] = src[:, N - i]
    return ComplexGridFunction(V.grid, out, V.label)
