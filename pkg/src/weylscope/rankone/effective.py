"""
Effective kernels on the transform side.

For the operator T a^w T^* on H_Phi with kernel K(x, conj z) against
exp(-2 Phi(z)) L(dz), the effective kernel is

    K_eff(x, z) = exp(-Phi(x)) K(x, conj z) exp(-Phi(z))

tabulated on a coarse box for x and z. Two routes:
- "rankone": sum over the rank-one quadrature of Lambda_Phi,
  K = c sum_{Y,T} H(Y, T) V_Y(x) conj(V_T(z))
- "direct": the transform of the real Weyl kernel in both variables,
  K = C^2 int int exp(i phi(x, y)) K_a(y, y') conj(exp(i phi(z, y'))) dy dy'

Size is compared with m(q~(x, z)) where q~(x, z) = q(rho(x), rho(z)) and
rho(x) = Re kappa^{-1}(x, (2/i) dPhi(x)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..bargmann.phases import (
    QuadraticPhase,
    kappa_inverse,
    lagrangian_point,
    phi_weight,
    radial_phase,
)
from ..bargmann.transform import (
    DEFAULT_COMPLEX_GRID,
    DEFAULT_FUNCTION_GRID,
    ComplexGrid,
    ComplexGridFunction,
    transform_constant,
)
from ..core.errors import DimensionError
from ..core.grids import RealGrid, SampledSymbol
from ..core.order_functions import OrderFunction
from ..core.symplectic import q_map
from ..utils.fitting import fit_log_slope
from ..weyl.kernels import resample_symbol, symbol_to_kernel, weyl_grid
from .coherent import coherent_weighted
from .reconstruct import RankOneQuadrature, rank_one_coefficients

ROUTES = ("rankone", "direct")

# Default table for x and z
EFFECTIVE_TABLE = ComplexGrid.square(1, 3.0, 12)


@dataclass(frozen=True, eq=False)
class EffectiveKernel:
    """
    K_eff on table x table.

    Attributes:
        table: Complex grid of x and of z (n = 1)
        matrix: K_eff[x, z] over the flattened table nodes
        route: "rankone" or "direct"
    """

    table: ComplexGrid
    matrix: np.ndarray
    route: str

    def as_function(self) -> ComplexGridFunction:
        """K_eff as a function of (x, z) in C^2, axes (Re x, Re z, Im x, Im z)"""
        N = self.table.re.points_per_axis
        vals = self.matrix.reshape(N, N, N, N).transpose(0, 2, 1, 3)
        grid = ComplexGrid(self.table.re.with_dim(2), self.table.im.with_dim(2))
        return ComplexGridFunction(grid, vals, f"K_eff[{self.route}]")

    def interior(self, fraction: float = 0.5) -> np.ndarray:
        """Mask of (x, z) pairs with both points in the inner part of the table"""
        z = self.table.flat_nodes()
        reach = fraction * self.table.re.half_width
        inside = np.all((np.abs(z.real) <= reach) & (np.abs(z.imag) <= reach), axis=-1)
        return inside[:, None] & inside[None, :]


def table_rho(table: ComplexGrid, phi: QuadraticPhase) -> np.ndarray:
    """rho(x) = Re kappa^{-1}(x, (2/i) dPhi(x)) at the table nodes"""
    W = phi_weight(phi)
    return kappa_inverse(phi, lagrangian_point(W, table.flat_nodes())).real


def tilde_q(table: ComplexGrid, phi: QuadraticPhase) -> np.ndarray:
    """q~(x, z) for all pairs of table nodes, shape (P, P, 4n)"""
    rho = table_rho(table, phi)
    return q_map(rho[:, None, :], rho[None, :, :])


def _rankone_matrix(a: SampledSymbol, phi: QuadraticPhase, table: ComplexGrid, quad: RankOneQuadrature,
                    function_grid: RealGrid, calibration: ComplexGrid) -> np.ndarray:
    nodes = quad.nodes(phi)
    Vw = coherent_weighted(nodes.base, phi, table, function_grid, calibration)
    G = rank_one_coefficients(a, nodes.rho)
    prefactor = 1.0 / (2.0 * (2.0 * np.pi) ** 2)
    C = prefactor * G * nodes.weights[:, None] * nodes.weights[None, :]
    return Vw.T @ C @ np.conj(Vw)


def _direct_matrix(a: SampledSymbol, phi: QuadraticPhase, table: ComplexGrid,
                   function_grid: RealGrid, calibration: ComplexGrid) -> np.ndarray:
    W = phi_weight(phi)
    K = symbol_to_kernel(resample_symbol(a, weyl_grid(function_grid)))
    x = table.flat_nodes()
    y = function_grid.points()
    E = np.exp(1j * phi(x[:, None, :], y[None, :, :]) - W(x)[:, None])
    c = transform_constant(phi, function_grid, calibration)
    h = function_grid.quad_weight
    return c * c * (E @ (K.entries * h * h) @ np.conj(E).T)


def effective_kernel(a: SampledSymbol, phi: Optional[QuadraticPhase] = None, route: str = "rankone",
                     table: ComplexGrid = EFFECTIVE_TABLE, quad: Optional[RankOneQuadrature] = None,
                     function_grid: RealGrid = DEFAULT_FUNCTION_GRID,
                     calibration: ComplexGrid = DEFAULT_COMPLEX_GRID) -> EffectiveKernel:
    """
    K_eff(x, z) = exp(-Phi(x)) K(x, conj z) exp(-Phi(z)) of T a^w T^*.

    Args:
        a: Symbol on a PhaseGrid (n = 1)
        phi: Phase (radial when omitted)
        route: "rankone" or "direct"
        table: Box tabulating x and z
        quad: Rank-one quadrature (route "rankone")
        function_grid: Real grid for e_0 and the real kernel
        calibration: Grid the transform constant is calibrated on

    Raises:
        ValueError: For an unknown route
    """
    phi = phi or radial_phase()
    if phi.n != 1 or table.n != 1:
        raise DimensionError("effective kernels are implemented for n = 1")
    if route == "rankone":
        matrix = _rankone_matrix(a, phi, table, quad or RankOneQuadrature(), function_grid, calibration)
    elif route == "direct":
        matrix = _direct_matrix(a, phi, table, function_grid, calibration)
    else:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    return EffectiveKernel(table, matrix, route)


def route_discrepancy(first: EffectiveKernel, second: EffectiveKernel, fraction: float = 0.5) -> float:
    """max |K1 - K2| / max |K2| over interior pairs"""
    mask = first.interior(fraction)
    scale = float(np.abs(second.matrix[mask]).max())
    return float(np.abs(first.matrix - second.matrix)[mask].max() / scale)


def kernel_bound_constant(K: EffectiveKernel, a_norm: float, m: OrderFunction, phi: QuadraticPhase) -> float:
    """Smallest C with |K_eff(x, z)| <= C ||a|| m(q~(x, z)) on the table"""
    weights = np.asarray(m(tilde_q(K.table, phi)), dtype=float)
    return float(np.max(np.abs(K.matrix) / (a_norm * weights)))


def offdiagonal_slope(K: EffectiveKernel, phi: QuadraticPhase, m: Optional[OrderFunction] = None,
                      bins: int = 12, floor: float = 1e-10, order: int = 2) -> float:
    """
    Slope s of log(max |K_eff| / m(q~)) against log<|rho(x) - rho(z)|>,
    taken over distance bins away from the diagonal. Decay like <.>^{-N}
    gives s <= -N.

    The fit of order N starts at distance max(1, N / 2). A kernel decaying
    faster than every power fits steeper at N = 4 than at N = 2.

    Raises:
        ValueError: If order < 1, or fewer than two bins stay above the floor
    """
    if order < 1:
        raise ValueError(f"order must be at least 1, got {order}")
    rho = table_rho(K.table, phi)
    dist = np.linalg.norm(rho[:, None, :] - rho[None, :, :], axis=-1)
    size = np.abs(K.matrix)
    if m is not None:
        size = size / np.asarray(m(tilde_q(K.table, phi)), dtype=float)
    start = max(1.0, 0.5 * order)
    if dist.max() <= start:
        raise ValueError(f"table too small for an order {order} fit")
    edges = np.linspace(start, dist.max(), bins + 1)
    radii, env = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (dist >= lo) & (dist < hi)
        if np.any(sel):
            radii.append(0.5 * (lo + hi))
            env.append(float(size[sel].max()))
    radii = np.asarray(radii)
    env = np.asarray(env)
    keep = env > floor * size.max()
    return fit_log_slope(radii[keep], env[keep])
