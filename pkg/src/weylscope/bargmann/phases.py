"""
Quadratic phases, weights and the exact critical-value calculus.

A QuadraticPhase is phi(x, y) = x.Ax/2 + x.By + y.Cy/2 on C^n x C^n with
det B != 0 and Im C > 0. Everything derived from it is again quadratic, so
every quantity here is a matrix obtained by one linear solve:

- the weight Phi(x) = sup_y -Im phi(x, y), a real form on C^n = R^2n
- its polarization Psi, holomorphic on C^n x C^n with Psi(x, conj x) = Phi(x)
- the canonical map kappa(y, -phi'_y) = (x, phi'_x) and its inverse
- critical values vc_y of joint forms (exact stationary phase)

Conventions:
- Real coordinates of x in C^n are v = (Re x, Im x); Phi(x) = v.S v
- A QuadraticForm stores M with value w.Mw/2, w the concatenated blocks
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..core.errors import DimensionError, PhaseError, SingularFormError

# Condition number above which a Hessian is treated as singular
SINGULAR_CONDITION = 1e12

# Eigenvalue floor for positivity checks
POSITIVITY_TOLERANCE = 1e-10


def _square(matrix, n: Optional[int], what: str) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{what} must be a square matrix, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionError(f"{what} must be {n}x{n}, got {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """
    Complex quadratic form w.Mw/2 over named blocks of variables.

    Attributes:
        matrix: Complex symmetric matrix M
        blocks: (name, size) pairs in the order the variables are stacked
        label: Where the form came from (used in error messages)
    """

    matrix: np.ndarray
    blocks: Tuple[Tuple[str, int], ...]
    label: str = ""

    def __post_init__(self) -> None:
        M = np.asarray(self.matrix, dtype=complex)
        size = sum(s for _, s in self.blocks)
        if M.shape != (size, size):
            raise DimensionError(f"form matrix {M.shape} does not match blocks of total size {size}")
        M = 0.5 * (M + M.T)
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "blocks", tuple((str(n), int(s)) for n, s in self.blocks))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.blocks)

    def indices(self, names: Iterable[str]) -> np.ndarray:
        """Positions of the given blocks in the stacked variable vector"""
        offsets: Dict[str, Tuple[int, int]] = {}
        start = 0
        for name, size in self.blocks:
            offsets[name] = (start, start + size)
            start += size
        idx = []
        for name in names:
            if name not in offsets:
                raise KeyError(f"form {self.label!r} has no block {name!r}; blocks: {self.names}")
            lo, hi = offsets[name]
            idx.extend(range(lo, hi))
        return np.asarray(idx, dtype=int)

    def block(self, rows: Union[str, Sequence[str]], cols: Union[str, Sequence[str]]) -> np.ndarray:
        rows = (rows,) if isinstance(rows, str) else tuple(rows)
        cols = (cols,) if isinstance(cols, str) else tuple(cols)
        return self.matrix[np.ix_(self.indices(rows), self.indices(cols))]

    def __call__(self, **values) -> np.ndarray:
        """Evaluate at points given per block name, batched over leading axes"""
        parts = []
        for name, size in self.blocks:
            if name not in values:
                raise KeyError(f"missing value for block {name!r}")
            v = np.asarray(values[name], dtype=complex)
            if v.shape[-1:] != (size,):
                raise DimensionError(f"block {name!r} needs a last axis of length {size}, got {v.shape}")
            parts.append(v)
        w = np.concatenate(np.broadcast_arrays(*parts), axis=-1) if len(parts) > 1 else parts[0]
        return 0.5 * np.einsum("...i,ij,...j->...", w, self.matrix, w)


def critical_value(form: QuadraticForm, eliminate: Union[str, Sequence[str]]):
    """
    Exact stationary phase: vc over the eliminated blocks.

    For w = (k, y) the critical point is y = -M_yy^{-1} M_yk k and the
    critical value is k.(M_kk - M_ky M_yy^{-1} M_yk)k / 2.

    Args:
        form: Joint quadratic form
        eliminate: Block name(s) of the stationarity variable

    Returns:
        (QuadraticForm over the kept blocks, critical point matrix y = Y k)

    Raises:
        SingularFormError: If the Hessian in the eliminated variables is singular
    """
    gone = (eliminate,) if isinstance(eliminate, str) else tuple(eliminate)
    kept = tuple(n for n in form.names if n not in gone)
    Myy = form.block(gone, gone)
    Myk = form.block(gone, kept)
    if Myy.size == 0:
        raise DimensionError("nothing to eliminate")
    if not np.all(np.isfinite(Myy)) or np.linalg.cond(Myy) > SINGULAR_CONDITION:
        raise SingularFormError(f"singular Hessian in {gone}", form.label)
    try:
        Ymap = -linalg.solve(Myy, Myk)
    except linalg.LinAlgError as e:
        raise SingularFormError(f"singular Hessian in {gone}: {e}", form.label) from e
    reduced = form.block(kept, kept) + form.block(kept, gone) @ Ymap
    sizes = dict(form.blocks)
    return QuadraticForm(reduced, tuple((n, sizes[n]) for n in kept), form.label), Ymap


@dataclass(frozen=True, eq=False)
class QuadraticPhase:
    """
    phi(x, y) = x.Ax/2 + x.By + y.Cy/2.

    Attributes:
        A: phi''_xx (complex symmetric)
        B: phi''_xy (invertible)
        C: phi''_yy (complex symmetric, Im C positive definite)
        label: Registry name
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    label: str = field(default="phase")

    def __post_init__(self) -> None:
        B = _square(self.B, None, "B")
        n = B.shape[0]
        A = _square(self.A, n, "A")
        C = _square(self.C, n, "C")
        for name, M in (("A", A), ("C", C)):
            if not np.allclose(M, M.T, atol=1e-14):
                raise PhaseError(f"{name} must be complex symmetric ({self.label})")
        if abs(np.linalg.det(B)) < 1e-12 or np.linalg.cond(B) > SINGULAR_CONDITION:
            raise PhaseError(f"det B must be non-zero ({self.label})")
        if np.linalg.eigvalsh(C.imag).min() <= POSITIVITY_TOLERANCE:
            raise PhaseError(f"Im C must be positive definite ({self.label})")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def key(self) -> Tuple:
        return (self.label, self.A.tobytes(), self.B.tobytes(), self.C.tobytes())

    def scaled(self, factor: float) -> "QuadraticPhase":
        return QuadraticPhase(factor * self.A, factor * self.B, factor * self.C, f"{factor:g}*{self.label}")

    def joint_form(self) -> QuadraticForm:
        M = np.block([[self.A, self.B], [self.B.T, self.C]])
        return QuadraticForm(M, (("x", self.n), ("y", self.n)), self.label)

    def __call__(self, x, y) -> np.ndarray:
        """phi(x, y) for x, y of shape (..., n)"""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return (0.5 * np.einsum("...i,ij,...j->...", x, self.A, x)
                + np.einsum("...i,ij,...j->...", x, self.B, y)
                + 0.5 * np.einsum("...i,ij,...j->...", y, self.C, y))


def radial_phase() -> QuadraticPhase:
    """(i/2)(x - y)^2 - (i/4)x^2, with Phi(x) = |x|^2/4"""
    return QuadraticPhase([[0.5j]], [[-1j]], [[1j]], "radial")


def symbol_side_phase() -> QuadraticPhase:
    """i(x - y)^2, with Phi(x) = (Im x)^2 and kappa(y, eta) = (y - i eta/2, eta)"""
    return QuadraticPhase([[2j]], [[-2j]], [[2j]], "symbol_side")


def tilted_phase() -> QuadraticPhase:
    """A phase with Re A != 0 and Re B != 0; Phi is not radial"""
    return QuadraticPhase([[0.1 + 0.5j]], [[0.2 - 1j]], [[1j]], "tilted")


PHASE_FACTORIES = {
    "radial": radial_phase,
    "symbol_side": symbol_side_phase,
    "tilted": tilted_phase,
}


# Weights

def _real_embedding(n: int) -> np.ndarray:
    """P with x = P v for v = (Re x, Im x)"""
    eye = np.eye(n)
    return np.hstack([eye, 1j * eye])


def _conjugate_embedding(n: int) -> np.ndarray:
    """T with v = T (x, conj x)"""
    eye = np.eye(n)
    return np.block([[0.5 * eye, 0.5 * eye], [-0.5j * eye, 0.5j * eye]])


def _real_coords(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


@dataclass(frozen=True, eq=False)
class Weight:
    """
    Quadratic weight Phi on C^n and its polarization.

    Attributes:
        Phi: Real symmetric 2n x 2n matrix S with Phi(x) = v.S v, v = (Re x, Im x)
        Psi: Complex symmetric 2n x 2n matrix H with Psi(x, w) = (x, w).H(x, w)
        aPhi: Reproducing kernel constant, once calibrated
        label: Name of the phase the weight came from
    """

    Phi: np.ndarray
    Psi: np.ndarray
    aPhi: Optional[float] = None
    label: str = ""

    @property
    def n(self) -> int:
        return self.Phi.shape[0] // 2

    def __call__(self, z) -> np.ndarray:
        """Phi at complex points of shape (..., n)"""
        v = _real_coords(z)
        return np.einsum("...i,ij,...j->...", v, self.Phi, v)

    def psi(self, x, w) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        w = np.asarray(w, dtype=complex)
        xw = np.concatenate(np.broadcast_arrays(x, w), axis=-1)
        return np.einsum("...i,ij,...j->...", xw, self.Psi, xw)

    def gradient(self, z) -> np.ndarray:
        """Holomorphic derivative dPhi/dx at z, shape (..., n)"""
        n = self.n
        z = np.asarray(z, dtype=complex)
        Hxx = self.Psi[:n, :n]
        Hxw = self.Psi[:n, n:]
        return 2.0 * (z @ Hxx.T) + 2.0 * (np.conj(z) @ Hxw)

    def real_gradient(self, z) -> np.ndarray:
        """Gradient of Phi in the real coordinates (Re x, Im x)"""
        return 2.0 * _real_coords(z) @ self.Phi

    def with_constant(self, aPhi: float) -> "Weight":
        return Weight(self.Phi, self.Psi, float(aPhi), self.label)


def phi_weight(phi: QuadraticPhase) -> Weight:
    """
    Phi(x) = sup_{y real} -Im phi(x, y), maximized exactly.

    With x = P v the y-problem is -y.My v - y.(Im C)y/2 - Im(x.Ax)/2 with
    M = Im(B^T P); its maximum is v.M^T (Im C)^{-1} M v / 2.

    Raises:
        PhaseError: If Im C is not positive definite or the Levi form of
            Phi is not positive definite
    """
    n = phi.n
    ImC = phi.C.imag
    if np.linalg.eigvalsh(ImC).min() <= POSITIVITY_TOLERANCE:
        raise PhaseError(f"the y-problem is not concave: Im C is not positive definite ({phi.label})")
    P = _real_embedding(n)
    M = (phi.B.T @ P).imag
    S = -0.5 * (P.T @ phi.A @ P).imag + 0.5 * M.T @ linalg.solve(ImC, M, assume_a="pos")
    S = 0.5 * (S + S.T)
    T = _conjugate_embedding(n)
    H = T.T @ S @ T
    H = 0.5 * (H + H.T)
    W = Weight(S, H, None, phi.label)
    if np.linalg.eigvalsh(levi_form(W)).min() <= POSITIVITY_TOLERANCE:
        raise PhaseError(f"Phi is not strictly plurisubharmonic ({phi.label})")
    return W


def levi_form(W: Weight) -> np.ndarray:
    """Hermitian matrix d^2 Phi / dx_j d(conj x_k)"""
    n = W.n
    L = 2.0 * W.Psi[:n, n:]
    return 0.5 * (L + L.conj().T)


def bergman_constant(W: Weight) -> float:
    """(2/pi)^n det(Levi form): the reproducing kernel constant of H_Phi"""
    return float((2.0 / np.pi) ** W.n * np.linalg.det(levi_form(W)).real)


def lagrangian_point(W: Weight, y) -> np.ndarray:
    """Y = (y, (2/i) dPhi/dx(y)) on Lambda_Phi, shape (..., 2n)"""
    y = np.asarray(y, dtype=complex)
    return np.concatenate([y, -2j * W.gradient(y)], axis=-1)


def exponent_gap(W: Weight, x, y) -> np.ndarray:
    """Phi(x) + Phi(y) - 2 Re Psi(x, conj y)"""
    return W(x) + W(y) - 2.0 * W.psi(x, np.conj(y)).real


def fit_lower_constant(values: np.ndarray, squared_distances: np.ndarray) -> float:
    """Largest c with values >= c * distance^2 on the sample (pairs at distance 0 skipped)"""
    values = np.asarray(values, dtype=float)
    d2 = np.asarray(squared_distances, dtype=float)
    mask = d2 > 1e-12
    if not np.any(mask):
        raise ValueError("no sample pairs at positive distance")
    return float(np.min(values[mask] / d2[mask]))


# Canonical transformation

def kappa_matrix(phi: QuadraticPhase) -> np.ndarray:
    """K with kappa(y, eta) = K (y, eta)"""
    Bt_inv = linalg.inv(phi.B.T)
    Xy = -Bt_inv @ phi.C
    Xeta = -Bt_inv
    return np.block([[Xy, Xeta], [phi.A @ Xy + phi.B, phi.A @ Xeta]])


def kappa_inverse_matrix(phi: QuadraticPhase) -> np.ndarray:
    """K^{-1}: y = B^{-1}(xi - Ax), eta = -B^T x - C y"""
    B_inv = linalg.inv(phi.B)
    Yx = -B_inv @ phi.A
    Yxi = B_inv
    return np.block([[Yx, Yxi], [-phi.B.T - phi.C @ Yx, -phi.C @ Yxi]])


def _apply(K: np.ndarray, point) -> np.ndarray:
    point = np.asarray(point, dtype=complex)
    if point.shape[-1] != K.shape[0]:
        raise DimensionError(f"points of dimension {point.shape[-1]} for a {K.shape[0]}-dimensional map")
    return point @ K.T


def kappa_apply(phi: QuadraticPhase, point) -> np.ndarray:
    """
    kappa(y, eta) = (x, phi'_x(x, y)) where -phi'_y(x, y) = eta.

    Args:
        phi: Phase
        point: Points (y, eta) of shape (..., 2n), real or complex

    Returns:
        Points (x, xi) of shape (..., 2n)
    """
    return _apply(kappa_matrix(phi), point)


def kappa_inverse(phi: QuadraticPhase, point) -> np.ndarray:
    return _apply(kappa_inverse_matrix(phi), point)


def lagrangian_volume(phi: QuadraticPhase) -> float:
    """
    Density of the symplectic volume of Lambda_Phi with respect to Lebesgue
    measure in the base coordinate x (graph chart).
    """
    n = phi.n
    K = kappa_matrix(phi)
    X = K[:n, :]
    real_jac = np.vstack([X.real, X.imag])
    det = abs(np.linalg.det(real_jac))
    if det < 1e-14:
        raise SingularFormError("base projection of Lambda_Phi is degenerate", phi.label)
    return 1.0 / det


# Derived quadratic forms

def ground_state_form(phi: QuadraticPhase) -> QuadraticForm:
    """g(x) = vc_y(phi(x, y) + i y^2/2), so that T e_0 = C exp(i g)"""
    n = phi.n
    M = np.block([[phi.A, phi.B], [phi.B.T, phi.C + 1j * np.eye(n)]])
    g, _ = critical_value(QuadraticForm(M, (("x", n), ("y", n)), f"g[{phi.label}]"), "y")
    return g


def ground_state_decay(phi: QuadraticPhase, W: Optional[Weight] = None) -> np.ndarray:
    """Real matrix of Phi + Im g in the coordinates (Re x, Im x)"""
    W = W or phi_weight(phi)
    g = ground_state_form(phi).matrix
    P = _real_embedding(phi.n)
    G = 0.5 * (P.T @ g @ P).imag
    return W.Phi + 0.5 * (G + G.T)


def fourier_phase_form(phi: QuadraticPhase) -> QuadraticForm:
    """
    psi(x, y) = vc_eta(phi(x, eta) - y.eta): the phase of T composed with the
    unitary Fourier transform.
    """
    n = phi.n
    Z = np.zeros((n, n), dtype=complex)
    eye = np.eye(n)
    M = np.block([
        [phi.A, Z, phi.B],
        [Z, Z, -eye],
        [phi.B.T, -eye, phi.C],
    ])
    form = QuadraticForm(M, (("x", n), ("y", n), ("eta", n)), f"psi[{phi.label}]")
    psi, _ = critical_value(form, "eta")
    return psi


def change_kernel_form(phi1: QuadraticPhase, phi2: QuadraticPhase) -> Tuple[QuadraticForm, complex]:
    """
    Exponent of the kernel of T_2 T_1^*.

    T_2 T_1^* has kernel c * exp(2 q(x, conj w)) against exp(-2 Phi_1(w)) L(dw),
    where q = (i/2) vc_y(phi_2(x, y) - conj(phi_1)(conj w, y)).

    Returns:
        (q as a form over blocks x, wbar; the Gaussian factor
        sqrt(2 pi / (-i alpha)) per dimension, alpha = C_2 - conj C_1)

    Raises:
        SingularFormError: If C_2 - conj C_1 is singular
    """
    if phi1.n != phi2.n:
        raise DimensionError("phases of different dimensions")
    n = phi1.n
    Z = np.zeros((n, n), dtype=complex)
    A1, B1, C1 = np.conj(phi1.A), np.conj(phi1.B), np.conj(phi1.C)
    M = np.block([
        [phi2.A, Z, phi2.B],
        [Z, -A1, -B1],
        [phi2.B.T, -B1.T, phi2.C - C1],
    ])
    label = f"{phi1.label}->{phi2.label}"
    form = QuadraticForm(M, (("x", n), ("wbar", n), ("y", n)), label)
    vc, _ = critical_value(form, "y")
    q = QuadraticForm(0.5j * vc.matrix, vc.blocks, label)
    alpha = phi2.C - C1
    gauss = complex(np.sqrt((2.0 * np.pi) ** n / np.linalg.det(-1j * alpha)))
    return q, gauss


def transfer_map(phi1: QuadraticPhase, phi2: QuadraticPhase):
    """
    Real-linear map chi on base points: w -> x-part of kappa_2 kappa_1^{-1}(w, (2/i) dPhi_1(w)).

    Returns:
        Callable mapping complex points (..., n) to complex points (..., n)
    """
    W1 = phi_weight(phi1)
    K = kappa_matrix(phi2) @ kappa_inverse_matrix(phi1)
    n = phi1.n

    def chi(w) -> np.ndarray:
        Y = lagrangian_point(W1, w)
        return (Y @ K.T)[..., :n]

    return chi


def change_gap(phi1: QuadraticPhase, phi2: QuadraticPhase, x, w) -> np.ndarray:
    """Phi_2(x) + Phi_1(w) - 2 Re q(x, conj w), q the exponent of T_2 T_1^*"""
    q, _ = change_kernel_form(phi1, phi2)
    W1, W2 = phi_weight(phi1), phi_weight(phi2)
    x = np.asarray(x, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return W2(x) + W1(w) - 2.0 * q(x=x, wbar=np.conj(w)).real
