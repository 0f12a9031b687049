"""
Least-squares fits used by the decay checks.
"""

from __future__ import annotations

import numpy as np


def fit_log_slope(radii: np.ndarray, values: np.ndarray, floor: float = 1e-300) -> float:
    """Slope s of log(values) ~ s * log(<r>) (polynomial decay rate, negative when decaying)"""
    r = np.asarray(radii, dtype=float)
    v = np.maximum(np.abs(np.asarray(values)), floor)
    if r.shape != v.shape or r.size < 2:
        raise ValueError("need at least two matching samples")
    slope, _ = np.polyfit(np.log(np.sqrt(1.0 + r * r)), np.log(v), 1)
    return float(slope)


def fit_gaussian_rate(radii: np.ndarray, values: np.ndarray, floor: float = 1e-300) -> float:
    """C in log(values) ~ c0 - r^2 / C"""
    r = np.asarray(radii, dtype=float)
    v = np.maximum(np.abs(np.asarray(values)), floor)
    slope, _ = np.polyfit(r * r, np.log(v), 1)
    if slope >= 0:
        return float("inf")
    return float(-1.0 / slope)
