"""
Schur bounds for the operator M with kernel m(q(x, y)) on E, and the
composed weight

    m3(q(x, y)) = int m1(q(x, z)) m2(q(z, y)) dz

Both integrals run over a truncated box. Whether they converge is decided
empirically: the computation is repeated on the box of twice the width (same
spacing) and a relative change above DIVERGENCE_TOLERANCE flags divergence.
Divergence is a result flag, never an exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from ..core.errors import DimensionError
from ..core.grids import RealGrid
from ..core.order_functions import OrderFunction, certify_order_function, tabulated
from ..core.symplectic import q_inverse, q_map

DIVERGENCE_TOLERANCE = 0.10

POWER_ITERATIONS = 50
POWER_TOLERANCE = 1e-8

P_TAGS = (1, 2, np.inf)


@dataclass(frozen=True)
class SchurBounds:
    """
    Row and column sups of m(q(x, y)) and a norm estimate for M on L^p.

    Attributes:
        row_sup: max_x sum_y m(q(x, y)) h^{2n}
        col_sup: max_y sum_x m(q(x, y)) h^{2n}
        p_norm_estimate: Estimate of the L^p operator norm
        p: 1, 2 or inf
        row_divergent: Row sup changed by more than 10% on the doubled box
        col_divergent: Same for the column sup
        row_sup_doubled: Row sup on the doubled box
        col_sup_doubled: Column sup on the doubled box
    """

    row_sup: float
    col_sup: float
    p_norm_estimate: float
    p: float
    row_divergent: bool = False
    col_divergent: bool = False
    row_sup_doubled: Optional[float] = None
    col_sup_doubled: Optional[float] = None

    @property
    def divergent(self) -> bool:
        return self.row_divergent or self.col_divergent


def parse_p(p: Union[int, float, str]) -> float:
    """Exponent tag 1, 2 or inf (strings such as "inf" accepted)"""
    if isinstance(p, str):
        p = np.inf if p.lower() in ("inf", "infinity", "oo") else float(p)
    p = float(p)
    if p not in P_TAGS:
        raise ValueError(f"p must be one of 1, 2, inf; got {p}")
    return p


def schur_matrix(m: OrderFunction, grid: RealGrid) -> np.ndarray:
    """Samples m(q(x_i, x_j)) over all node pairs of a grid on E (dim 2n)"""
    if 2 * grid.dim != m.ambient_dim:
        raise DimensionError(f"grid over E must have dim {m.ambient_dim // 2}, got {grid.dim}")
    pts = grid.points()
    Q = q_map(pts[:, None, :], pts[None, :, :])
    return np.asarray(m(Q), dtype=float)


# Rows of m(q(x, y)) evaluated at once when only the sums are needed
_ROW_BLOCK = 256


def _sups(m: OrderFunction, grid: RealGrid) -> Tuple[float, float]:
    pts = grid.points()
    rows = np.empty(len(pts))
    cols = np.zeros(len(pts))
    for start in range(0, len(pts), _ROW_BLOCK):
        block = pts[start:start + _ROW_BLOCK]
        M = np.asarray(m(q_map(block[:, None, :], pts[None, :, :])), dtype=float)
        rows[start:start + len(block)] = M.sum(axis=1)
        cols += M.sum(axis=0)
    w = grid.quad_weight
    return float(rows.max() * w), float(cols.max() * w)


def _relative_change(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(b - a) / max(abs(a), np.finfo(float).tiny)


def power_norm(A: np.ndarray, iterations: int = POWER_ITERATIONS,
               tol: float = POWER_TOLERANCE) -> float:
    """Largest singular value of A by power iteration on A^T A"""
    v = np.ones(A.shape[1]) / np.sqrt(A.shape[1])
    lam = 0.0
    for _ in range(iterations):
        w = A.T @ (A @ v)
        new = float(np.linalg.norm(w))
        if new == 0.0:
            return 0.0
        v = w / new
        if lam and abs(new - lam) <= tol * new:
            lam = new
            break
        lam = new
    return float(np.sqrt(lam))


def schur_bounds(m: OrderFunction, grid: RealGrid, p: Union[int, float, str] = np.inf) -> SchurBounds:
    """
    Schur test quantities for M f(x) = int m(q(x, y)) f(y) dy.

    Args:
        m: Order function on E x E*
        grid: Grid over E (dim = 2n)
        p: 1, 2 or inf ('inf' accepted)

    Returns:
        SchurBounds; p = inf uses the row sup, p = 1 the column sup, p = 2 a
        power iteration on the discretized operator
    """
    p = parse_p(p)
    row, col = _sups(m, grid)
    row2, col2 = _sups(m, grid.doubled())
    row_div = _relative_change(row, row2) > DIVERGENCE_TOLERANCE
    col_div = _relative_change(col, col2) > DIVERGENCE_TOLERANCE
    if p == np.inf:
        estimate = row
    elif p == 1:
        estimate = col
    else:
        estimate = power_norm(schur_matrix(m, grid) * grid.quad_weight)
    return SchurBounds(row, col, estimate, p, row_div, col_div, row2, col2)


def composed_weight_at(m1: OrderFunction, m2: OrderFunction, x: np.ndarray, y: np.ndarray,
                       zgrid: RealGrid) -> np.ndarray:
    """
    int m1(q(x, z)) m2(q(z, y)) dz by quadrature on zgrid, for batches of
    pairs x, y of shape (..., 2n).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.shape[-1] != zgrid.dim:
        raise DimensionError("x, y and the z grid must share the dimension of E")
    z = zgrid.points()
    flat_x = x.reshape(-1, zgrid.dim)
    flat_y = y.reshape(-1, zgrid.dim)
    out = np.empty(len(flat_x))
    for k in range(len(flat_x)):
        a = m1(q_map(np.broadcast_to(flat_x[k], z.shape), z))
        b = m2(q_map(z, np.broadcast_to(flat_y[k], z.shape)))
        out[k] = float(np.sum(a * b) * zgrid.quad_weight)
    return out.reshape(x.shape[:-1])


def compose_order_functions(m1: OrderFunction, m2: OrderFunction, grid: RealGrid,
                            table_points: int = 8, table_half_width: Optional[float] = None
                            ) -> OrderFunction:
    """
    Tabulate m3 on a coarse grid over E x E* and certify it.

    Args:
        m1, m2: Order functions on E x E*
        grid: Quadrature grid over E for the z integral
        table_points: Nodes per axis of the table (even)
        table_half_width: Half width of the table box (default: grid's)

    Returns:
        Tabulated OrderFunction with certified C0 and N0 = N0_1 + N0_2;
        flags contains 'divergent' when the z integral is not stable under
        doubling the box
    """
    if m1.ambient_dim != m2.ambient_dim or 2 * grid.dim != m1.ambient_dim:
        raise DimensionError("order functions and grid dimensions do not fit")
    L = grid.half_width if table_half_width is None else table_half_width
    tgrid = RealGrid(m1.ambient_dim, L, table_points)
    x, y = q_inverse(tgrid.points())
    values = composed_weight_at(m1, m2, x, y, grid)
    doubled = composed_weight_at(m1, m2, x, y, grid.doubled())
    change = _relative_change(float(values.max()), float(doubled.max()))
    flags = ("divergent",) if change > DIVERGENCE_TOLERANCE else ()
    N0 = (m1.N0 or 0.0) + (m2.N0 or 0.0)
    m3 = tabulated(values.reshape(tgrid.shape), tgrid, label=f"m3[{m1.label},{m2.label}]",
                   N0=N0, flags=flags)
    C0 = certify_order_function(m3, tgrid, N0)
    return OrderFunction(m3.family, m3.params, m3.ambient_dim, C0=C0, N0=N0, label=m3.label,
                         table=m3.table, table_grid=tgrid, flags=flags)
