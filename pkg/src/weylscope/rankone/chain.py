"""
Intermediate Schur estimate in the boundedness proof.

With F(tau) = |(T u, V_T)| on the real chart of Lambda_Phi, the function

    H(rho) = int m(q(rho, tau)) F(tau) dtau

must satisfy ||H||_{L^p} <= p_norm_estimate * ||F||_{L^p}, where the
estimate is the one schur_bounds computes for the kernel m(q(x, y)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..bargmann.phases import QuadraticPhase, phi_weight, radial_phase
from ..bargmann.transform import DEFAULT_COMPLEX_GRID, ComplexGrid, bargmann_transform
from ..core.grids import SampledFunction
from ..core.order_functions import OrderFunction
from ..core.symplectic import q_map
from ..weyl.schur import parse_p, schur_bounds
from .coherent import coherent_weighted, overlaps_with
from .reconstruct import RankOneQuadrature

# Allowed excess of ||H|| over the Schur bound
CHAIN_SLACK = 1.05


@dataclass(frozen=True)
class SchurChainResult:
    """||H||_p against p_norm_estimate * ||F||_p"""

    p: float
    h_norm: float
    f_norm: float
    p_norm_estimate: float

    @property
    def ratio(self) -> float:
        bound = self.p_norm_estimate * self.f_norm
        return self.h_norm / bound if bound > 0 else 0.0

    @property
    def passed(self) -> bool:
        return self.ratio <= CHAIN_SLACK


def _lp(values: np.ndarray, weight: float, p: float) -> float:
    if p == np.inf:
        return float(np.max(np.abs(values)))
    return float((np.sum(np.abs(values) ** p) * weight) ** (1.0 / p))


def schur_chain_check(u: SampledFunction, m: OrderFunction, p: Union[int, float, str] = 2,
                      phi: Optional[QuadraticPhase] = None, radius: float = 5.0, points_per_axis: int = 16,
                      grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> SchurChainResult:
    """
    Compare H = M F with the Schur estimate for M.

    Args:
        u: Function whose coherent-state overlaps give F
        m: Order function on E x E* (n = 1)
        p: 1, 2 or inf
        phi: Phase (radial when omitted)
        radius, points_per_axis: Real-chart quadrature of Lambda_Phi
        grid: Complex grid of the overlaps
    """
    p = parse_p(p)
    phi = phi or radial_phase()
    quad = RankOneQuadrature(radius, points_per_axis, chart="real")
    nodes = quad.nodes(phi)
    table = coherent_weighted(nodes.base, phi, grid, u.grid)
    F = np.abs(overlaps_with(bargmann_transform(u, phi, grid, warn=False), table, phi_weight(phi)))
    w = float(nodes.weights[0])
    M = np.asarray(m(q_map(nodes.rho[:, None, :], nodes.rho[None, :, :])), dtype=float)
    H = M @ F * w
    estimate = schur_bounds(m, quad.grid(phi.n), p).p_norm_estimate
    return SchurChainResult(p, _lp(H, w, p), _lp(F, w, p), estimate)
