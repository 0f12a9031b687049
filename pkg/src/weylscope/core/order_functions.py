"""
Order functions

An order function on E x E* is a positive weight m with
    m(X) <= C0 <X - Y>^N0 m(Y)    for all X, Y.

Design:
- Closed registry of families: constant, bracket power <X>^s, anisotropic
  product <T>^s1 <Xi>^s2, gaussian surrogate exp(-rate |X|^2), products and
  translates of the above, and tabulations (computed composed weights)
- Families with a known Peetre constant carry it; the others are certified
  empirically on a grid by an exhaustive pair scan
- No user callables: every weight can be certified

The gaussian family is not an order function on all of E x E*; it is
admissible on a bounded box, which is where every computation happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import CertificationError, DimensionError, RegistryError, UnknownEntryError
from .grids import RealGrid, japanese_bracket

FAMILIES = ("constant", "bracket", "anisotropic", "gaussian", "product", "translated", "tabulated")

# Rows of the pair scan handled per block
_PAIR_BLOCK = 256


@dataclass(frozen=True, eq=False)
class OrderFunction:
    """
    A certified weight on E x E* (ambient dimension 4n).

    Attributes:
        family: One of FAMILIES
        params: Family parameters
        ambient_dim: Dimension of E x E*
        C0: Certified constant (None until certified)
        N0: Certified exponent (None until certified)
    """

    family: str
    params: Tuple[float, ...] = ()
    ambient_dim: int = 4
    C0: Optional[float] = None
    N0: Optional[float] = None
    label: str = ""
    factors: Tuple["OrderFunction", ...] = field(default=(), repr=False)
    table: Optional[np.ndarray] = field(default=None, repr=False)
    table_grid: Optional[RealGrid] = field(default=None, repr=False)
    flags: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise RegistryError(f"unknown order-function family {self.family!r}; known: {FAMILIES}")
        if self.ambient_dim % 4:
            raise DimensionError(f"ambient dimension must be 4n, got {self.ambient_dim}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.family == "tabulated":
            if self.table is None or self.table_grid is None:
                raise RegistryError("tabulated order function needs table and table_grid")
            if self.table_grid.dim != self.ambient_dim:
                raise DimensionError("table grid dimension differs from ambient dimension")
            axes = (self.table_grid.axis(),) * self.ambient_dim
            interp = RegularGridInterpolator(axes, np.asarray(self.table, dtype=float))
            object.__setattr__(self, "_interp", interp)

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.ambient_dim:
            raise DimensionError(f"expected points of dimension {self.ambient_dim}, got {X.shape[-1]}")
        d = self.ambient_dim // 2
        fam = self.family
        if fam == "constant":
            c = self.params[0] if self.params else 1.0
            return np.full(X.shape[:-1], c)
        if fam == "bracket":
            return japanese_bracket(X) ** self.params[0]
        if fam == "anisotropic":
            s1, s2 = self.params
            return japanese_bracket(X[..., :d]) ** s1 * japanese_bracket(X[..., d:]) ** s2
        if fam == "gaussian":
            rate = self.params[0] if self.params else 0.25
            return np.exp(-rate * np.sum(X * X, axis=-1))
        if fam == "product":
            out = np.ones(X.shape[:-1])
            for f in self.factors:
                out = out * f(X)
            return out
        if fam == "translated":
            return self.factors[0](X - np.asarray(self.params))
        # tabulated: queries outside the table are clamped to its box
        lo = self.table_grid.axis()[0]
        hi = self.table_grid.axis()[-1]
        flat = np.clip(X.reshape(-1, self.ambient_dim), lo, hi)
        return self._interp(flat).reshape(X.shape[:-1])

    @property
    def diverges(self) -> bool:
        return "divergent" in self.flags

    @property
    def is_certified(self) -> bool:
        return self.C0 is not None and self.N0 is not None

    def certified(self, grid: RealGrid, N0: Optional[float] = None) -> "OrderFunction":
        """Copy carrying the empirical C0 for N0 (default: the stored N0, else 0)"""
        N0 = self.N0 if N0 is None else N0
        N0 = 0.0 if N0 is None else N0
        C0 = certify_order_function(self, grid, N0)
        return replace(self, C0=C0, N0=float(N0))

    def __mul__(self, other: "OrderFunction") -> "OrderFunction":
        return product(self, other)


def constant(value: float = 1.0, n: int = 1) -> OrderFunction:
    if value <= 0:
        raise CertificationError(f"constant order function must be positive, got {value}")
    return OrderFunction("constant", (value,), 4 * n, C0=1.0, N0=0.0, label=f"const({value:g})")


def bracket(s: float, n: int = 1) -> OrderFunction:
    """<X>^s with the Peetre constants C0 = 2^{|s|/2}, N0 = |s|"""
    return OrderFunction("bracket", (s,), 4 * n, C0=2.0 ** (abs(s) / 2), N0=abs(s), label=f"<X>^{s:g}")


def anisotropic(s1: float, s2: float, n: int = 1) -> OrderFunction:
    """<T>^s1 <Xi>^s2 on E x E*"""
    return OrderFunction(
        "anisotropic", (s1, s2), 4 * n,
        C0=2.0 ** ((abs(s1) + abs(s2)) / 2), N0=abs(s1) + abs(s2),
        label=f"<T>^{s1:g}<Xi>^{s2:g}",
    )


def gaussian(rate: float = 0.25, n: int = 1) -> OrderFunction:
    """exp(-rate |X|^2): admissible on bounded boxes only, certify before use"""
    return OrderFunction("gaussian", (rate,), 4 * n, label=f"exp(-{rate:g}|X|^2)")


def product(m1: OrderFunction, m2: OrderFunction) -> OrderFunction:
    if m1.ambient_dim != m2.ambient_dim:
        raise DimensionError("product of order functions on different spaces")
    C0 = m1.C0 * m2.C0 if m1.is_certified and m2.is_certified else None
    N0 = m1.N0 + m2.N0 if m1.is_certified and m2.is_certified else None
    return OrderFunction(
        "product", (), m1.ambient_dim, C0=C0, N0=N0,
        label=f"{m1.label}*{m2.label}", factors=(m1, m2),
    )


def translated(m: OrderFunction, shift: Sequence[float]) -> OrderFunction:
    """X -> m(X - shift); translation keeps the Peetre constants"""
    shift = tuple(float(s) for s in shift)
    if len(shift) != m.ambient_dim:
        raise DimensionError(f"shift of length {len(shift)} for ambient dimension {m.ambient_dim}")
    return OrderFunction(
        "translated", shift, m.ambient_dim, C0=m.C0, N0=m.N0,
        label=f"{m.label}(. - v)", factors=(m,),
    )


def tabulated(table: np.ndarray, grid: RealGrid, label: str = "tabulated",
              N0: Optional[float] = None, flags: Tuple[str, ...] = ()) -> OrderFunction:
    table = np.asarray(table, dtype=float)
    if table.shape != grid.shape:
        raise DimensionError(f"table shape {table.shape} does not match grid {grid.shape}")
    return OrderFunction("tabulated", (), grid.dim, N0=N0, label=label, table=table,
                         table_grid=grid, flags=tuple(flags))


def certify_order_function(m: OrderFunction, grid: RealGrid, N0: float,
                           return_argmax: bool = False):
    """
    Minimal empirical C0 in m(X) <= C0 <X - Y>^N0 m(Y) over all node pairs.

    Args:
        m: Order function to certify
        grid: RealGrid over E x E* (dim = m.ambient_dim)
        N0: Exponent, >= 0
        return_argmax: Also return the maximizing pair (X, Y)

    Returns:
        C0, or (C0, (X, Y)) when return_argmax is set

    Raises:
        CertificationError: Non-positive or non-finite weight, or overflow
    """
    if N0 < 0:
        raise CertificationError(f"N0 must be >= 0, got {N0}")
    if grid.dim != m.ambient_dim:
        raise DimensionError(f"grid dimension {grid.dim} differs from ambient {m.ambient_dim}")
    pts = grid.points()
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        vals = np.asarray(m(pts), dtype=float)
    bad = ~np.isfinite(vals) | (vals <= 0)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise CertificationError(
            f"order function {m.label or m.family} is not positive and finite at {pts[i]}",
            point=tuple(pts[i]), value=float(vals[i]),
        )
    logv = np.log(vals)
    best = -np.inf
    arg = (0, 0)
    for start in range(0, len(pts), _PAIR_BLOCK):
        block = pts[start:start + _PAIR_BLOCK]
        diff = block[:, None, :] - pts[None, :, :]
        logr = logv[start:start + _PAIR_BLOCK, None] - logv[None, :]
        if N0:
            logr = logr - N0 * np.log(japanese_bracket(diff))
        k = int(np.argmax(logr))
        i, j = divmod(k, len(pts))
        if logr[i, j] > best:
            best = float(logr[i, j])
            arg = (start + i, j)
    if best > np.log(np.finfo(float).max):
        raise CertificationError(
            f"certification overflow for {m.label or m.family}",
            point=(tuple(pts[arg[0]]), tuple(pts[arg[1]])), value=best,
        )
    C0 = float(np.exp(best))
    if return_argmax:
        return C0, (pts[arg[0]], pts[arg[1]])
    return C0


def check_order_function(m: OrderFunction, grid: RealGrid, rtol: float = 1e-9) -> float:
    """
    Verify the stored (C0, N0) on a grid.

    Returns:
        The empirical C0

    Raises:
        CertificationError: If m is uncertified or the stored C0 is exceeded
    """
    if not m.is_certified:
        raise CertificationError(f"{m.label or m.family} carries no certificate")
    empirical, (X, Y) = certify_order_function(m, grid, m.N0, return_argmax=True)
    if empirical > m.C0 * (1.0 + rtol):
        raise CertificationError(
            f"{m.label or m.family}: empirical C0 {empirical:.6g} exceeds certified {m.C0:.6g} "
            f"(N0={m.N0:g}, L={grid.half_width:g})",
            point=(tuple(X), tuple(Y)), value=empirical,
        )
    return empirical


def order_function_from_spec(spec: Mapping[str, Any], n: int = 1) -> OrderFunction:
    """
    Build an order function from a config mapping.

    Documented keys: family, params, C0, N0 (ambient dimension follows n).
    """
    family = spec.get("family")
    params: Sequence[float] = tuple(spec.get("params", ()))
    if family == "constant":
        m = constant(params[0] if params else 1.0, n)
    elif family == "bracket":
        m = bracket(params[0], n)
    elif family == "anisotropic":
        m = anisotropic(params[0], params[1], n)
    elif family == "gaussian":
        m = gaussian(params[0] if params else 0.25, n)
    else:
        raise RegistryError(f"family {family!r} cannot be built from a spec")
    if "C0" in spec or "N0" in spec:
        m = replace(m, C0=spec.get("C0", m.C0), N0=spec.get("N0", m.N0))
    return m


def registered_order_functions(n: int = 1) -> Dict[str, OrderFunction]:
    """The named weights used by the verification suites"""
    return {
        "one": constant(1.0, n),
        "bracket_2": bracket(2.0, n),
        "bracket_-2": bracket(-2.0, n),
        "decay_xi_5": anisotropic(0.0, -5.0, n),
        "growth_t_1_decay_xi_5": anisotropic(1.0, -5.0, n),
        "decay_xi_3": anisotropic(0.0, -3.0, n),
    }


def get_order_function(name: str, n: int = 1) -> OrderFunction:
    registry = registered_order_functions(n)
    if name not in registry:
        raise UnknownEntryError(f"unknown order function {name!r}; available: {sorted(registry)}")
    return registry[name]
