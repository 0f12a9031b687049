"""
Magnetic translations

For a complex linear form l(x, xi) = lx.x + lxi.xi the operator

    exp(-i l(x, D)) = exp(-(i/2) lx.x) o tau_{lxi} o exp(-(i/2) lx.x)

acts by V(x) -> exp(-i lx.x + (i/2) lx.lxi) V(x - lxi). It is unitary on
H_Phi when l is real on Lambda_Phi, i.e. when -lx = (2/i) dPhi(lxi).

Two routes:
- magnetic_translate: on grid values, shifting V exp(-Phi) band-limitedly
  (the shift may be complex; its real and imaginary parts shift the two
  axes of the box)
- translated_transform: exactly, by evaluating T u at the shifted points

egorov_check compares the transform of a real magnetic translation with
the complex one for k = l o kappa^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..bargmann.phases import QuadraticPhase, Weight, kappa_inverse_matrix, phi_weight
from ..bargmann.transform import (
    DEFAULT_COMPLEX_GRID,
    ComplexGrid,
    ComplexGridFunction,
    bargmann_evaluate,
    bargmann_transform,
    hp_norm,
)
from ..core.errors import DimensionError, ShiftOutOfBoxError
from ..core.grids import SampledFunction
from ..utils.fourier import fractional_shift

# Tolerance of the reality condition for forms flagged real
REALITY_TOLERANCE = 1e-12


def _vector(v, n: Optional[int] = None) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=complex))
    if arr.ndim != 1 or (n is not None and arr.shape != (n,)):
        raise DimensionError(f"expected a vector of length {n}, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class LinearFormEll:
    """
    l(x, xi) = lx.x + lxi.xi on C^2n.

    Attributes:
        lx: Coefficients of x
        lxi: Coefficients of xi
        real: Whether l is flagged real on Lambda_Phi
    """

    lx: np.ndarray
    lxi: np.ndarray
    real: bool = False

    def __post_init__(self) -> None:
        lx = _vector(self.lx)
        object.__setattr__(self, "lx", lx)
        object.__setattr__(self, "lxi", _vector(self.lxi, len(lx)))

    @property
    def n(self) -> int:
        return len(self.lx)

    @classmethod
    def zero(cls, n: int = 1) -> "LinearFormEll":
        return cls(np.zeros(n), np.zeros(n), True)

    @classmethod
    def real_on(cls, W: Weight, x_star) -> "LinearFormEll":
        """The form sigma((x, xi), H_l) with H_l above x_star: lxi = x_star, lx = -(2/i) dPhi(x_star)"""
        x_star = _vector(x_star, W.n)
        return cls(2j * W.gradient(x_star), x_star, True)

    def reality_defect(self, W: Weight) -> float:
        """| lx + (2/i) dPhi(lxi) |"""
        return float(np.max(np.abs(self.lx - 2j * W.gradient(self.lxi))))

    def __call__(self, x, xi) -> np.ndarray:
        return np.asarray(x) @ self.lx + np.asarray(xi) @ self.lxi

    def phase(self, z: np.ndarray) -> np.ndarray:
        """exp(-i lx.z + (i/2) lx.lxi) at points (..., n)"""
        return np.exp(-1j * (np.asarray(z) @ self.lx) + 0.5j * np.dot(self.lx, self.lxi))


def _check_reality(ell: LinearFormEll, W: Weight) -> None:
    if ell.real and ell.reality_defect(W) > REALITY_TOLERANCE * max(1.0, float(np.abs(ell.lx).max())):
        raise ValueError(f"form flagged real violates the reality condition by {ell.reality_defect(W):.3e}")


def magnetic_translate(V: ComplexGridFunction, ell: LinearFormEll, W: Weight) -> ComplexGridFunction:
    """
    exp(-i l(x, D)) V on the grid of V.

    V(x - lxi) is obtained by shifting the bounded function V exp(-Phi)
    along Re x and Im x with the trigonometric interpolant, then restoring
    exp(Phi(x - lxi)).

    Raises:
        ShiftOutOfBoxError: If a component of lxi exceeds half the box
        ValueError: If l is flagged real but violates the reality condition
    """
    n = V.grid.n
    if ell.n != n or W.n != n:
        raise DimensionError("form, weight and grid must share n")
    _check_reality(ell, W)
    s = ell.lxi
    for k in range(n):
        if abs(s[k].real) > V.grid.re.half_width / 2 or abs(s[k].imag) > V.grid.im.half_width / 2:
            raise ShiftOutOfBoxError(f"shift {s} leaves the inner half of the box")
    z = V.grid.nodes()
    damped = V.values * np.exp(-W(z))
    for k in range(n):
        if s[k].real:
            damped = fractional_shift(damped, -s[k].real, V.grid.re.spacing, axis=k)
        if s[k].imag:
            damped = fractional_shift(damped, -s[k].imag, V.grid.im.spacing, axis=n + k)
    shifted = damped * np.exp(W(z - s))
    return ComplexGridFunction(V.grid, ell.phase(z) * shifted, V.label)


def translated_transform(u: SampledFunction, phi: QuadraticPhase, ell: LinearFormEll, points,
                         grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> np.ndarray:
    """exp(-i l(x, D)) T u evaluated exactly at complex points (..., n)"""
    points = np.asarray(points, dtype=complex)
    return ell.phase(points) * bargmann_evaluate(u, phi, points - ell.lxi, grid)


def real_translate(u: SampledFunction, ell: LinearFormEll) -> SampledFunction:
    """
    exp(-i l(x, D)) u on R (n = 1) for real l: exp(-i lx x + (i/2) lx lxi) u(x - lxi).

    Raises:
        ShiftOutOfBoxError: If |lxi| exceeds half the grid
    """
    if u.grid.dim != 1 or ell.n != 1:
        raise DimensionError("real_translate is implemented for n = 1")
    if np.abs(ell.lx.imag).max() > 0 or np.abs(ell.lxi.imag).max() > 0:
        raise ValueError("real_translate needs a real form on T*R")
    shift = float(ell.lxi[0].real)
    if abs(shift) > u.grid.half_width / 2:
        raise ShiftOutOfBoxError(f"shift {shift} leaves the inner half of the grid")
    vals = fractional_shift(u.values, -shift, u.grid.spacing) if shift else u.values
    x = u.grid.axis()[:, None]
    return SampledFunction(u.grid, ell.phase(x) * vals)


def egorov_form(ell: LinearFormEll, phi: QuadraticPhase) -> LinearFormEll:
    """k = l o kappa^{-1}, as a form on the transform side"""
    n = ell.n
    k = kappa_inverse_matrix(phi).T @ np.concatenate([ell.lx, ell.lxi])
    return LinearFormEll(k[:n], k[n:])


def egorov_check(u: SampledFunction, ell: LinearFormEll, phi: QuadraticPhase,
                 grid: ComplexGrid = DEFAULT_COMPLEX_GRID) -> float:
    """
    ||T(exp(-i l(x, D)) u) - exp(-i k(x, D)) T u||_{H^2_Phi} with k = l o kappa^{-1}.

    The left side translates u on R and transforms by quadrature; the right
    side evaluates T u exactly at the shifted complex points.
    """
    W = phi_weight(phi)
    lhs = bargmann_transform(real_translate(u, ell), phi, grid, warn=False)
    rhs = translated_transform(u, phi, egorov_form(ell, phi), grid.nodes(), grid)
    diff = ComplexGridFunction(grid, lhs.values - rhs)
    return hp_norm(diff, W, 2, warn=False)
