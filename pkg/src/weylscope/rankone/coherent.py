"""
Coherent states on Lambda_Phi

V_0 = T e_0 and, for Y = (y, (2/i) dPhi(y)) on Lambda_Phi,

    V_Y = exp(i sigma((x, D), Y)) V_0,    V_Y(x) = exp(-i lx.x + (i/2) lx.lxi) V_0(x + y)

with lx = (2/i) dPhi(y) and lxi = -y. V_Y is the transform of the real
coherent state centred at -Re kappa^{-1}(Y), so V_Y concentrates near -y.

Values are computed exactly (T e_0 evaluated at x + y) or through the
grid route (magnetic_translate of the sampled V_0); both agree on interior
nodes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..bargmann.phases import QuadraticPhase, Weight, lagrangian_point, phi_weight
from ..bargmann.transform import (
    DEFAULT_COMPLEX_GRID,
    DEFAULT_FUNCTION_GRID,
    ComplexGrid,
    ComplexGridFunction,
    bargmann_evaluate,
    bargmann_transform,
    hp_norm,
)
from ..core.errors import BoundaryMassWarning, DimensionError, ShiftOutOfBoxError
from ..core.grids import RealGrid, SampledFunction
from ..stft.windows import ground_state
from ..utils.fitting import fit_gaussian_rate
from .magnetic import LinearFormEll, magnetic_translate

# Rows of base points per batched evaluation
_NODE_CHUNK = 16

# Allowed deviation of the H^2_Phi norm of V_Y from 1 before the box counts as too small
NORM_TOLERANCE = 1e-4


def coherent_form(W: Weight, y) -> LinearFormEll:
    """The real form l = -sigma(., Y) for Y above y"""
    y = np.atleast_1d(np.asarray(y, dtype=complex))
    if y.shape != (W.n,):
        raise DimensionError(f"base point must have length {W.n}, got shape {y.shape}")
    return LinearFormEll(-2j * W.gradient(y), -y, True)


def _ground_sample(function_grid: RealGrid) -> SampledFunction:
    return SampledFunction(function_grid, ground_state(function_grid.points()))


def _check_inside(y: np.ndarray, grid: ComplexGrid) -> None:
    if np.any(np.abs(y.real) > grid.re.half_width / 2) or np.any(np.abs(y.imag) > grid.im.half_width / 2):
        raise ShiftOutOfBoxError(f"base point {y} leaves the inner half of the box")


@dataclass(frozen=True, eq=False)
class CoherentState:
    """
    V_Y on a complex grid.

    Attributes:
        y: Base point of Y in C^n
        Y: The point (y, (2/i) dPhi(y)) of Lambda_Phi
        values: V_Y at the grid nodes
        form: The form l with V_Y = exp(-i l(x, D)) V_0
    """

    y: np.ndarray
    Y: np.ndarray
    values: ComplexGridFunction
    form: LinearFormEll

    def norm(self, W: Weight, p=2) -> float:
        return hp_norm(self.values, W, p, warn=False)


def coherent_state(y, phi: QuadraticPhase, grid: ComplexGrid = DEFAULT_COMPLEX_GRID,
                   function_grid: RealGrid = DEFAULT_FUNCTION_GRID, exact: bool = True) -> CoherentState:
    """
    V_Y for the point Y of Lambda_Phi above y.

    Args:
        y: Base point in C^n
        phi: Phase of the transform
        grid: Complex grid carrying the values
        function_grid: Real grid e_0 is sampled on
        exact: Evaluate T e_0 at the shifted points; otherwise translate the
            grid values of V_0 with magnetic_translate

    Raises:
        ShiftOutOfBoxError: If y leaves the inner half of the box

    Warns:
        BoundaryMassWarning: If the H^2_Phi norm on the grid misses 1 by
            more than NORM_TOLERANCE
    """
    W = phi_weight(phi)
    y = np.atleast_1d(np.asarray(y, dtype=complex))
    ell = coherent_form(W, y)
    _check_inside(y, grid)
    e0 = _ground_sample(function_grid)
    if exact:
        z = grid.nodes()
        vals = ell.phase(z) * bargmann_evaluate(e0, phi, z + y, grid)
        V = ComplexGridFunction(grid, vals, f"V_Y[{phi.label}]")
    else:
        V0 = bargmann_transform(e0, phi, grid, warn=False)
        V = magnetic_translate(V0, ell, W)
    norm = hp_norm(V, W, 2, warn=False)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        warnings.warn(
            f"coherent state at y = {y} has norm {norm:.6f} on the grid",
            BoundaryMassWarning,
            stacklevel=2,
        )
    return CoherentState(y, lagrangian_point(W, y), V, ell)


def coherent_weighted(base_points, phi: QuadraticPhase, grid: ComplexGrid = DEFAULT_COMPLEX_GRID,
                      function_grid: RealGrid = DEFAULT_FUNCTION_GRID,
                      calibration: Optional[ComplexGrid] = None) -> np.ndarray:
    """
    V_Y(z) exp(-Phi(z)) for a batch of base points.

    Args:
        base_points: Complex array (m, n)
        phi: Phase
        grid: Complex grid of the points z
        function_grid: Grid e_0 is sampled on
        calibration: Grid the transform constant is calibrated on (grid
            itself when omitted; pass a large box for small tables)

    Returns:
        Complex array (m, grid.size)
    """
    calibration = calibration or grid
    W = phi_weight(phi)
    y = np.atleast_2d(np.asarray(base_points, dtype=complex))
    if y.shape[-1] != phi.n:
        raise DimensionError(f"base points need a last axis of length {phi.n}, got {y.shape}")
    e0 = _ground_sample(function_grid)
    z = grid.flat_nodes()
    damp = np.exp(-W(z))
    lx = -2j * W.gradient(y)
    lxi = -y
    const = 0.5j * np.sum(lx * lxi, axis=-1)
    out = np.empty((len(y), len(z)), dtype=complex)
    for start in range(0, len(y), _NODE_CHUNK):
        yc = y[start:start + _NODE_CHUNK]
        sl = slice(start, start + len(yc))
        V0 = bargmann_evaluate(e0, phi, z[None, :, :] + yc[:, None, :], calibration)
        phase = np.exp(-1j * (lx[sl] @ z.T) + const[sl, None])
        out[sl] = phase * V0 * damp[None, :]
    return out


def weighted_values(V: ComplexGridFunction, W: Weight) -> np.ndarray:
    """V exp(-Phi) at the nodes, flattened, with its phase"""
    z = V.grid.flat_nodes()
    return V.values.ravel() * np.exp(-W(z))


def overlaps_with(V: ComplexGridFunction, table: np.ndarray, W: Weight) -> np.ndarray:
    """(V, V_Y)_{H^2_Phi} for every row of a coherent_weighted table"""
    return (np.conj(table) @ weighted_values(V, W)) * V.grid.quad_weight


def gaussian_decay_constant(state: CoherentState, W: Weight, floor: float = 1e-8) -> float:
    """
    C in |V_Y(x)| exp(-Phi(x)) ~ c exp(-|x + y|^2 / C), fitted over nodes whose
    weighted modulus exceeds floor times its maximum.
    """
    w = state.values.weighted(W).ravel()
    z = state.values.grid.flat_nodes()
    keep = w > floor * w.max()
    r = np.linalg.norm(z[keep] + state.y, axis=-1)
    return fit_gaussian_rate(r, w[keep])


def overlap_profile(v: SampledFunction, phi: QuadraticPhase, radii, direction=None,
                    grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> np.ndarray:
    """|(V_Y, T v)_{H^2_Phi}| for base points y = r * direction"""
    W = phi_weight(phi)
    n = phi.n
    d = np.ones(n, dtype=complex) if direction is None else np.asarray(direction, dtype=complex)
    d = d / np.linalg.norm(d)
    y = np.multiply.outer(np.asarray(radii, dtype=float), d)
    _check_inside(y, grid)
    table = coherent_weighted(y, phi, grid, v.grid)
    Tv = bargmann_transform(v, phi, grid, warn=False)
    return np.abs(np.conj(overlaps_with(Tv, table, W)))


def coherent_norms(base_points, phi: QuadraticPhase, grid: ComplexGrid = DEFAULT_COMPLEX_GRID,
                   function_grid: Optional[RealGrid] = None) -> np.ndarray:
    """||V_Y||_{H^2_Phi} for a batch of base points"""
    table = coherent_weighted(base_points, phi, grid, function_grid or DEFAULT_FUNCTION_GRID)
    return np.sqrt(np.sum(np.abs(table) ** 2, axis=-1) * grid.quad_weight)
