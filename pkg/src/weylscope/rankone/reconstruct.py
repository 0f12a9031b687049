"""
Rank-one decomposition of Weyl operators on the transform side.

For a Schwartz symbol a on T*R (n = 1),

    (a^w u, v) = 1 / (2^n (2 pi)^{2n}) int int exp(i sigma(rho, tau)/2) F(rho, tau)
                 (V_Y, T v) (T u, V_T) dY dT

where rho = Re kappa^{-1}(Y), tau = Re kappa^{-1}(T), dY is the symplectic
volume of Lambda_Phi and

    F(rho, tau) = pi^{-n} int exp(i sigma(rho - tau, zeta)) f_0(zeta + (rho + tau)/2) a(zeta) dzeta

is the symplectic Fourier transform of the windowed symbol b = a o kappa^{-1}
read in the coordinates rho, so no resampling of a is needed.

Design:
- Lambda_Phi is tiled by a tensor trapezoid rule on a ball of radius R with
  M nodes per axis, either in the base coordinate y (graph chart, weighted by
  lagrangian_volume) or in rho (real chart)
- The coherent-state table V_Y exp(-Phi) is computed once per node set and
  shared by the two overlap vectors
- F is separable in (zeta_x, zeta_xi) and is evaluated in row blocks of node
  pairs; the reduction order is fixed
- The pullback route tabulates b = a o kappa^{-1} on a base-chart grid of
  Lambda_Phi and integrates there; it agrees with the real route up to
  interpolation error
- The contribution of the outermost shell is compared with the full sum of
  moduli; above 1% the result carries tail_flag and a TruncationWarning
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..bargmann.phases import (
    QuadraticPhase,
    kappa_apply,
    kappa_inverse,
    kappa_matrix,
    lagrangian_point,
    lagrangian_volume,
    phi_weight,
    radial_phase,
)
from ..bargmann.transform import (
    DEFAULT_COMPLEX_GRID,
    ComplexGrid,
    bargmann_transform,
)
from ..core.errors import AliasingWarning, DimensionError, TruncationWarning
from ..core.grids import RealGrid, SampledFunction, SampledSymbol
from ..core.symplectic import symplectic_form
from ..utils.fourier import interpolation_matrix
from .coherent import coherent_weighted, overlaps_with

CHARTS = ("base", "real")

# Where the zeta integral of F is taken: the grid of a, or Lambda_Phi
COEFFICIENT_ROUTES = ("real", "pullback")

# Fraction of the total modulus allowed on the outer shell
TAIL_TOLERANCE = 0.01

# Rows of node pairs per block in the coefficient computation
_PAIR_ROWS = 8


@dataclass(frozen=True)
class RankOneQuadrature:
    """
    Trapezoid rule on a ball-truncated box tiling Lambda_Phi.

    Attributes:
        radius: Truncation radius R
        points_per_axis: Nodes M per real axis
        chart: "base" (nodes are base points y) or "real" (nodes are rho)
    """

    radius: float = 5.0
    points_per_axis: int = 16
    chart: str = "base"

    def __post_init__(self) -> None:
        if self.chart not in CHARTS:
            raise ValueError(f"chart must be one of {CHARTS}, got {self.chart!r}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.radius / self.points_per_axis

    @property
    def phase_flag(self) -> bool:
        """The factor exp(i sigma/2) turns by more than pi/2 per cell at the rim"""
        return self.radius * self.spacing / 2.0 > np.pi / 2.0

    def grid(self, n: int) -> RealGrid:
        return RealGrid(2 * n, self.radius, self.points_per_axis)

    def nodes(self, phi: QuadraticPhase) -> "QuadratureNodes":
        n = phi.n
        grid = self.grid(n)
        g = grid.points()
        r = np.linalg.norm(g, axis=-1)
        keep = r <= self.radius
        g, r = g[keep], r[keep]
        weight = grid.quad_weight
        if self.chart == "base":
            base = g[:, :n] + 1j * g[:, n:]
            rho = kappa_inverse(phi, lagrangian_point(phi_weight(phi), base)).real
            weight = weight * lagrangian_volume(phi)
        else:
            rho = g
            base = kappa_apply(phi, rho)[:, :n]
        shell = r > self.radius - self.spacing
        return QuadratureNodes(base, rho, np.full(len(g), weight), shell)


@dataclass(frozen=True, eq=False)
class QuadratureNodes:
    """
    Nodes of Lambda_Phi in both coordinates.

    Attributes:
        base: Base points y, complex (m, n)
        rho: Real points Re kappa^{-1}(Y), (m, 2n)
        weights: Quadrature weights (m,)
        shell: Mask of the outermost shell
    """

    base: np.ndarray
    rho: np.ndarray
    weights: np.ndarray
    shell: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class RankOneResult:
    """
    A reconstructed matrix element with its diagnostics.

    Attributes:
        value: Approximation of (a^w u, v)
        total_modulus: Sum of the moduli of all terms
        shell_modulus: Same over pairs with a node on the outer shell
        tail_flag: shell_modulus above 1% of total_modulus
        phase_flag: Oscillation of exp(i sigma/2) unresolved at the rim
        node_count: Nodes per factor
    """

    value: complex
    total_modulus: float
    shell_modulus: float
    tail_flag: bool
    phase_flag: bool
    node_count: int


def _require_n1(phi: QuadraticPhase, a: Optional[SampledSymbol] = None) -> None:
    if phi.n != 1 or (a is not None and a.grid.n != 1):
        raise DimensionError("the rank-one quadrature is implemented for n = 1")


def rank_one_coefficients(a: SampledSymbol, rho: np.ndarray, tau: Optional[np.ndarray] = None) -> np.ndarray:
    """
    exp(i sigma(rho, tau)/2) F(rho, tau) for all pairs of nodes.

    Args:
        a: Symbol on a PhaseGrid (n = 1)
        rho: Row nodes (m, 2)
        tau: Column nodes (k, 2); rho when omitted

    Returns:
        Complex array (m, k)
    """
    if a.grid.n != 1:
        raise DimensionError("rank_one_coefficients is implemented for n = 1")
    rho = np.asarray(rho, dtype=float)
    tau = rho if tau is None else np.asarray(tau, dtype=float)
    zx, zxi = a.grid.axes()
    A = a.values
    w = a.grid.quad_weight
    out = np.empty((len(rho), len(tau)), dtype=complex)
    for start in range(0, len(rho), _PAIR_ROWS):
        r = rho[start:start + _PAIR_ROWS, None, :]
        d = r - tau[None, :, :]
        c = 0.5 * (r + tau[None, :, :])
        Ex = np.exp(-(zx + c[..., 0:1]) ** 2 + 1j * d[..., 1:2] * zx)
        Exi = np.exp(-(zxi + c[..., 1:2]) ** 2 - 1j * d[..., 0:1] * zxi)
        F = (2.0 / np.pi) * w * np.sum((Ex @ A) * Exi, axis=-1)
        phase = np.exp(0.5j * symplectic_form(r, tau[None, :, :]))
        out[start:start + len(r)] = phase * F
    return out


def pullback_nodes(a: SampledSymbol, phi: QuadraticPhase) -> QuadratureNodes:
    """
    Square grid in the base coordinate of Lambda_Phi pulled back through
    kappa^{-1}, kept where it lands inside the box of a.

    The grid is fine enough that the pulled-back spacing is at most the
    spacing of a, and wide enough that the pulled-back box covers a.
    """
    _require_n1(phi, a)
    X = kappa_matrix(phi)[:1, :]
    s = np.linalg.svd(np.vstack([X.real, X.imag]), compute_uv=False)
    gx, gxi = a.grid.x, a.grid.xi
    half = s[0] * float(np.hypot(gx.half_width, gxi.half_width))
    step = s[-1] * min(gx.spacing, gxi.spacing)
    grid = RealGrid(2, half, 2 * int(np.ceil(half / step)))
    g = grid.points()
    base = g[:, :1] + 1j * g[:, 1:]
    rho = kappa_inverse(phi, lagrangian_point(phi_weight(phi), base)).real
    inside = ((rho[:, 0] >= -gx.half_width) & (rho[:, 0] < gx.half_width - gx.spacing)
              & (rho[:, 1] >= -gxi.half_width) & (rho[:, 1] < gxi.half_width - gxi.spacing))
    weight = grid.quad_weight * lagrangian_volume(phi)
    count = int(inside.sum())
    return QuadratureNodes(base[inside], rho[inside], np.full(count, weight), np.zeros(count, dtype=bool))


def pullback_symbol(a: SampledSymbol, rho: np.ndarray) -> np.ndarray:
    """a at real points rho (m, 2) by band-limited interpolation on the grid of a"""
    zx, zxi = a.grid.axes()
    rho = np.asarray(rho, dtype=float)
    Mx = interpolation_matrix(zx, rho[:, 0])
    Mxi = interpolation_matrix(zxi, rho[:, 1])
    return np.einsum("pi,ij,pj->p", Mx, a.values, Mxi)


def pullback_coefficients(a: SampledSymbol, phi: QuadraticPhase, rho: np.ndarray,
                          tau: Optional[np.ndarray] = None) -> np.ndarray:
    """
    rank_one_coefficients with b = a o kappa^{-1} tabulated on pullback_nodes
    and the zeta integral taken over Lambda_Phi.

    Args:
        a: Symbol on a PhaseGrid (n = 1)
        phi: Phase whose Lambda_Phi carries the zeta grid
        rho: Row nodes (m, 2)
        tau: Column nodes (k, 2); rho when omitted

    Returns:
        Complex array (m, k)
    """
    rho = np.asarray(rho, dtype=float)
    tau = rho if tau is None else np.asarray(tau, dtype=float)
    zeta = pullback_nodes(a, phi)
    b = pullback_symbol(a, zeta.rho) * zeta.weights
    zx, zxi = zeta.rho[:, 0], zeta.rho[:, 1]
    out = np.empty((len(rho), len(tau)), dtype=complex)
    for row, r in enumerate(rho):
        d = r - tau
        c = 0.5 * (r + tau)
        E = np.exp(1j * (d[:, 1:2] * zx - d[:, 0:1] * zxi)
                   - (zx + c[:, 0:1]) ** 2 - (zxi + c[:, 1:2]) ** 2)
        F = (2.0 / np.pi) * (E @ b)
        out[row] = np.exp(0.5j * symplectic_form(r[None, :], tau)) * F
    return out


def rank_one_element(Y, T, u: SampledFunction, v: SampledFunction, phi: QuadraticPhase,
                     grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> complex:
    """
    (T u, V_T)_{H^2_Phi} (V_Y, T v)_{H^2_Phi}, the matrix element (Pi_{Y,T} T u, T v).

    Args:
        Y, T: Base points in C^n
        u, v: Functions on the same real grid
        phi: Phase
        grid: Complex grid of the H^2_Phi quadrature
    """
    W = phi_weight(phi)
    table = coherent_weighted(np.stack([np.atleast_1d(Y), np.atleast_1d(T)]).astype(complex),
                              phi, grid, u.grid)
    Tu = bargmann_transform(u, phi, grid, warn=False)
    Tv = bargmann_transform(v, phi, grid, warn=False)
    alpha = overlaps_with(Tu, table[1:2], W)[0]
    beta = np.conj(overlaps_with(Tv, table[0:1], W)[0])
    return complex(alpha * beta)


def rank_one_reconstruct(a: SampledSymbol, u: SampledFunction, v: SampledFunction,
                         quad: Optional[RankOneQuadrature] = None, phi: Optional[QuadraticPhase] = None,
                         grid: ComplexGrid = DEFAULT_COMPLEX_GRID, warn: bool = True,
                         coefficients: str = "real") -> RankOneResult:
    """
    (a^w u, v) through the rank-one decomposition.

    Args:
        a: Schwartz symbol on a PhaseGrid (n = 1)
        u, v: Functions on the same real grid
        quad: Quadrature on Lambda_Phi (defaults: R = 5, M = 16, base chart)
        phi: Phase (radial when omitted)
        grid: Complex grid of the H^2_Phi overlaps
        warn: Issue TruncationWarning / AliasingWarning for raised flags
        coefficients: "real" integrates F over the grid of a, "pullback" over
            Lambda_Phi through a o kappa^{-1}

    Returns:
        RankOneResult
    """
    if coefficients not in COEFFICIENT_ROUTES:
        raise ValueError(f"coefficients must be one of {COEFFICIENT_ROUTES}, got {coefficients!r}")
    quad = quad or RankOneQuadrature()
    phi = phi or radial_phase()
    _require_n1(phi, a)
    W = phi_weight(phi)
    nodes = quad.nodes(phi)
    table = coherent_weighted(nodes.base, phi, grid, u.grid)
    alpha = overlaps_with(bargmann_transform(u, phi, grid, warn=False), table, W)
    beta = np.conj(overlaps_with(bargmann_transform(v, phi, grid, warn=False), table, W))
    if coefficients == "pullback":
        G = pullback_coefficients(a, phi, nodes.rho)
    else:
        G = rank_one_coefficients(a, nodes.rho)
    prefactor = 1.0 / (2.0 * (2.0 * np.pi) ** 2)
    terms = prefactor * G * (beta * nodes.weights)[:, None] * (alpha * nodes.weights)[None, :]
    moduli = np.abs(terms)
    total = float(moduli.sum())
    on_shell = nodes.shell[:, None] | nodes.shell[None, :]
    shell = float(moduli[on_shell].sum())
    tail = total > 0 and shell > TAIL_TOLERANCE * total
    if warn and tail:
        warnings.warn(
            f"outer shell carries {shell / total:.2%} of the rank-one sum (R = {quad.radius})",
            TruncationWarning,
            stacklevel=2,
        )
    if warn and quad.phase_flag:
        warnings.warn(
            f"exp(i sigma/2) is under-resolved at R = {quad.radius}, M = {quad.points_per_axis}",
            AliasingWarning,
            stacklevel=2,
        )
    return RankOneResult(complex(terms.sum()), total, shell, bool(tail), quad.phase_flag, len(nodes))
