"""
Symplectic linear algebra on E = T*R^n.

J = [[0, I], [-I, 0]], sigma(X, Y) = JX . Y, and the bijection
q(x, y) = ((x + y)/2, J^{-1}(y - x)) from E x E onto E x E*.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class SymplecticStructure:
    """Standard symplectic matrix J in dimension 2n (integer entries)"""

    dim: int
    J: np.ndarray

    @classmethod
    def standard(cls, n: int) -> "SymplecticStructure":
        if n < 1:
            raise DimensionError(f"n must be positive, got {n}")
        eye = np.eye(n, dtype=np.int64)
        zero = np.zeros((n, n), dtype=np.int64)
        J = np.block([[zero, eye], [-eye, zero]])
        J.setflags(write=False)
        return cls(n, J)

    @property
    def J_inv(self) -> np.ndarray:
        # J^{-1} = -J
        return -self.J


def _standard(n: int) -> SymplecticStructure:
    return SymplecticStructure.standard(n)


def _check_pair(X: np.ndarray, Y: np.ndarray) -> int:
    if X.shape[-1] != Y.shape[-1]:
        raise DimensionError(f"dimension mismatch: {X.shape[-1]} vs {Y.shape[-1]}")
    if X.shape[-1] % 2:
        raise DimensionError(f"phase space points need even dimension, got {X.shape[-1]}")
    return X.shape[-1] // 2


def symplectic_form(X, Y, S: SymplecticStructure | None = None):
    """
    sigma(X, Y) = (J X) . Y, batched over leading axes.

    Works for real and complex points (complex-bilinear, no conjugation).

    Raises:
        DimensionError: If X and Y differ in dimension or it is odd
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    n = _check_pair(X, Y)
    S = S or _standard(n)
    if S.dim != n:
        raise DimensionError(f"structure has n={S.dim}, points have n={n}")
    JX = X @ S.J.T
    return np.sum(JX * Y, axis=-1)


def apply_J(X, inverse: bool = False) -> np.ndarray:
    X = np.asarray(X)
    n = X.shape[-1] // 2
    JX = np.concatenate([X[..., n:], -X[..., :n]], axis=-1)
    return -JX if inverse else JX


def q_map(x, y) -> np.ndarray:
    """
    q(x, y) = ((x + y)/2, J^{-1}(y - x)), batched over leading axes.

    Returns:
        Array with last axis of length 4n: the E-part followed by the E*-part
    """
    x = np.asarray(x)
    y = np.asarray(y)
    _check_pair(x, y)
    return np.concatenate([(x + y) / 2.0, apply_J(y - x, inverse=True)], axis=-1)


def q_inverse(point) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of q_map: (T, Xi) -> (T - J Xi / 2, T + J Xi / 2)"""
    point = np.asarray(point)
    if point.shape[-1] % 4:
        raise DimensionError(f"E x E* points need dimension 4n, got {point.shape[-1]}")
    d = point.shape[-1] // 2
    T, Xi = point[..., :d], point[..., d:]
    JXi = apply_J(Xi)
    return T - JXi / 2.0, T + JXi / 2.0
