"""
Fourier conventions

    F u(xi) = integral exp(-i x.xi) u(x) dx

discretized by the centred DFT scaled by spacing**d, so that the frequency
nodes form RealGrid.dual() (spacing pi/L, node N/2 at zero frequency).
Band-limited interpolation and fractional shifts use the same trigonometric
interpolant, with the Nyquist term split symmetrically so that real data stay
real.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from scipy import fft as sfft

from ..core.errors import DimensionError


def default_workers() -> int:
    """Worker count for scipy.fft: physical cores when psutil is available"""
    try:
        import psutil
    except ImportError:  # pragma: no cover
        psutil = None
    if psutil is not None:
        count = psutil.cpu_count(logical=False)
        if count:
            return int(count)
    return 1


def centered_fft(values: np.ndarray, spacing: float | Sequence[float], axes: Sequence[int],
                 workers: Optional[int] = None) -> np.ndarray:
    """Samples of F u on the dual grid, transform over the given axes"""
    axes = tuple(axes)
    weight = _weight(spacing, axes)
    shifted = sfft.ifftshift(values, axes=axes)
    out = sfft.fftn(shifted, axes=axes, workers=workers)
    return weight * sfft.fftshift(out, axes=axes)


def centered_ifft(values: np.ndarray, spacing: float | Sequence[float], axes: Sequence[int],
                  workers: Optional[int] = None) -> np.ndarray:
    """Inverse of centered_fft; spacing is the spacing of the original (x) grid"""
    axes = tuple(axes)
    weight = _weight(spacing, axes)
    shifted = sfft.ifftshift(values, axes=axes)
    out = sfft.ifftn(shifted, axes=axes, workers=workers)
    return sfft.fftshift(out, axes=axes) / weight


def _weight(spacing, axes) -> float:
    if np.ndim(spacing) == 0:
        return float(spacing) ** len(axes)
    spacing = tuple(spacing)
    if len(spacing) != len(axes):
        raise DimensionError("one spacing per transformed axis is required")
    return float(np.prod(spacing))


def angular_frequencies(count: int, spacing: float) -> np.ndarray:
    """Angular frequencies for k = -N/2..N/2, both Nyquist ends included"""
    ks = np.arange(-(count // 2), count // 2 + 1)
    return 2.0 * np.pi * ks / (count * spacing)


def interpolation_matrix(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Matrix M with (M @ f)(p) = trigonometric interpolant of samples f at p.

    Args:
        nodes: Uniform, even-length node array
        points: Evaluation points

    Returns:
        Complex array of shape (len(points), len(nodes))
    """
    nodes = np.asarray(nodes, dtype=float)
    points = np.asarray(points)
    N = len(nodes)
    if N % 2:
        raise DimensionError("interpolation needs an even number of nodes")
    h = nodes[1] - nodes[0]
    omega = angular_frequencies(N, h)
    weights = np.ones(len(omega))
    weights[0] = weights[-1] = 0.5
    left = np.exp(1j * np.multiply.outer(points - nodes[0], omega)) * weights
    right = np.exp(-1j * np.multiply.outer(omega, nodes - nodes[0]))
    return (left @ right) / N


def fractional_shift(values: np.ndarray, offset: float, spacing: float, axis: int = -1,
                     workers: Optional[int] = None) -> np.ndarray:
    """
    Band-limited samples of u(x + offset) from samples of u on a periodic grid.
    """
    N = values.shape[axis]
    omega = 2.0 * np.pi * sfft.fftfreq(N, spacing)
    factor = np.exp(1j * omega * offset)
    if N % 2 == 0:
        factor[N // 2] = np.cos(np.pi * offset / spacing)
    shape = [1] * values.ndim
    shape[axis] = N
    spec = sfft.fft(values, axis=axis, workers=workers)
    return sfft.ifft(spec * factor.reshape(shape), axis=axis, workers=workers)


def spectral_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """d/dx of a periodic band-limited sample vector (Nyquist mode dropped)"""
    N = values.shape[-1]
    omega = 2.0 * np.pi * sfft.fftfreq(N, spacing)
    if N % 2 == 0:
        omega[N // 2] = 0.0
    return sfft.ifft(1j * omega * sfft.fft(values))


def nonuniform_dft_matrix(nodes: np.ndarray, frequencies: np.ndarray, spacing: float) -> np.ndarray:
    """Rows exp(-i xi x_j) * spacing: direct quadrature of F at arbitrary frequencies"""
    return np.exp(-1j * np.multiply.outer(frequencies, nodes)) * spacing
