"""
Mollification u_nu = psi(x / nu) (u * phi_{1/nu}), phi_{1/nu}(x) = nu^{2n} phi(nu x).

psi is the Gaussian exp(-|x|^2 / 2) (psi(0) = 1) and phi is a product of
one-dimensional Gaussians exp(-t^2) truncated to |t| <= cutoff and
renormalized to unit mass. The convolution is a product on the DFT side;
phi_hat is tabulated once by fine Simpson quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from ..core.grids import RealGrid, SampledSymbol
from ..utils.fourier import centered_fft, centered_ifft
from .transform import square_grid

# Simpson nodes for the truncated Gaussian and its Fourier transform
_PHI_NODES = 4001


@dataclass(frozen=True)
class MollifierSpec:
    """
    Attributes:
        nu: Mollification parameter (positive integer)
        cutoff: Support half-width of each factor of phi
    """

    nu: int = 1
    cutoff: float = 3.0

    def __post_init__(self) -> None:
        if int(self.nu) != self.nu or self.nu < 1:
            raise ValueError(f"nu must be a positive integer, got {self.nu!r}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff!r}")

    @staticmethod
    def psi(x: np.ndarray) -> np.ndarray:
        """exp(-|x|^2 / 2) over the last axis"""
        x = np.asarray(x, dtype=float)
        return np.exp(-0.5 * np.sum(x * x, axis=-1))

    def phi_1d(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) <= self.cutoff, np.exp(-t * t), 0.0) / _phi_mass(self.cutoff)

    def phi_integral(self) -> float:
        """Mass of one factor of phi (1 up to quadrature error)"""
        t = np.linspace(-self.cutoff, self.cutoff, _PHI_NODES)
        return float(simpson(self.phi_1d(t), x=t))

    def phi_hat_1d(self, omega: np.ndarray) -> np.ndarray:
        """int exp(-i t omega) phi_1d(t) dt (real, even, 1 at omega = 0)"""
        omega = np.asarray(omega, dtype=float)
        t = np.linspace(-self.cutoff, self.cutoff, _PHI_NODES)
        weights = self.phi_1d(t)
        flat = omega.ravel()
        vals = simpson(np.cos(np.multiply.outer(flat, t)) * weights, x=t, axis=-1)
        return (vals / self.phi_integral()).reshape(omega.shape)


@lru_cache(maxsize=16)
def _phi_mass(cutoff: float) -> float:
    t = np.linspace(-cutoff, cutoff, _PHI_NODES)
    return float(simpson(np.exp(-t * t), x=t))


def mollify(u: SampledSymbol, spec: MollifierSpec) -> SampledSymbol:
    """
    psi(x / nu) (u * phi_{1/nu}) on the grid of u.

    The convolution is periodic on the grid box; u should decay toward the
    edges (or be periodic) for the result to approximate the convolution on E.
    """
    grid: RealGrid = square_grid(u)
    axes = tuple(range(grid.dim))
    spectrum = centered_fft(u.values, grid.spacing, axes)
    xi_axis = grid.dual().axis() / spec.nu
    factor_1d = spec.phi_hat_1d(xi_axis)
    multiplier = np.ones(grid.shape)
    for k in range(grid.dim):
        shape = [1] * grid.dim
        shape[k] = -1
        multiplier = multiplier * factor_1d.reshape(shape)
    smooth = centered_ifft(spectrum * multiplier, grid.spacing, axes)
    X = np.stack(grid.mesh(), axis=-1)
    return SampledSymbol(u.grid, spec.psi(X / spec.nu) * smooth, u.label)
