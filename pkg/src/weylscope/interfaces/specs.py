"""
Named symbols, functions, phases and order functions.

Everything the CLI and the suites refer to by name is resolved here. A spec
is a registry name with optional parameters:

    f0
    gauss_bump:c1=1,c2=-0.5,s=0.7
    hermite:3
    gauss:x0=1,p0=0.5,s=0.8

Sampled symbols are cached per (spec, grid), least recently used first out;
get_cache_stats() reports hits, misses and evictions. The suite runner
clears the cache between suites.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..bargmann.hermite import hermite_sample
from ..bargmann.phases import PHASE_FACTORIES, QuadraticPhase
from ..core.errors import SpecSyntaxError, UnknownEntryError
from ..core.grids import PhaseGrid, RealGrid, SampledFunction, SampledSymbol
from ..core.order_functions import OrderFunction, registered_order_functions
from ..weyl.kernels import frequency_taper, weyl_grid

SymbolFunc = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ParsedSpec:
    name: str
    params: Dict[str, float] = field(default_factory=dict)
    args: Tuple[float, ...] = ()


def parse_spec(spec: str) -> ParsedSpec:
    """
    Split 'name:key=value,...' (bare values are positional).

    Raises:
        SpecSyntaxError: On empty names, bad numbers or repeated keys
    """
    if not isinstance(spec, str) or not spec.strip():
        raise SpecSyntaxError(f"empty spec {spec!r}")
    name, _, rest = spec.strip().partition(":")
    name = name.strip()
    if not name:
        raise SpecSyntaxError(f"spec {spec!r} has no name")
    params: Dict[str, float] = {}
    args: List[float] = []
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        try:
            number = float(value if eq else key)
        except ValueError as e:
            raise SpecSyntaxError(f"spec {spec!r}: {item!r} is not a number") from e
        if not eq:
            args.append(number)
            continue
        key = key.strip()
        if not key or key in params:
            raise SpecSyntaxError(f"spec {spec!r}: bad or repeated key {key!r}")
        params[key] = number
    return ParsedSpec(name, params, tuple(args))


# Symbols

@dataclass(frozen=True)
class SymbolEntry:
    """
    A symbol family on T*R.

    Attributes:
        build: params -> a(x, xi)
        defaults: Parameter defaults
        decays: Schwartz class (usable in the rank-one decomposition)
        taper: Grows or oscillates up to the xi boundary of a Weyl grid
    """

    build: Callable[[Mapping[str, float]], SymbolFunc]
    defaults: Dict[str, float] = field(default_factory=dict)
    decays: bool = True
    taper: bool = False


def _gauss(p: Mapping[str, float]) -> SymbolFunc:
    c1, c2, s = p["c1"], p["c2"], p["s"]
    return lambda x, xi: np.exp(-((x - c1) ** 2 + (xi - c2) ** 2) / (2.0 * s * s))


def _modulated(p: Mapping[str, float]) -> SymbolFunc:
    k1, k2 = p["k1"], p["k2"]
    return lambda x, xi: np.exp(-0.5 * (x * x + xi * xi) + 1j * (k1 * x + k2 * xi))


def _bump(p: Mapping[str, float]) -> SymbolFunc:
    r = p["r"]

    def factor(t):
        s = np.asarray(t, dtype=float) / r
        inside = np.abs(s) < 1.0
        out = np.zeros_like(s)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out

    return lambda x, xi: factor(x) * factor(xi)


SYMBOLS: Dict[str, SymbolEntry] = {
    "one": SymbolEntry(lambda p: (lambda x, xi: np.ones(np.broadcast(x, xi).shape)), decays=False),
    "x": SymbolEntry(lambda p: (lambda x, xi: x + 0.0 * xi), decays=False),
    "xi": SymbolEntry(lambda p: (lambda x, xi: xi + 0.0 * x), decays=False, taper=True),
    "oscillator": SymbolEntry(lambda p: (lambda x, xi: x * x + xi * xi), decays=False, taper=True),
    "f0": SymbolEntry(lambda p: (lambda x, xi: 2.0 * np.exp(-(x * x + xi * xi)))),
    "gauss_bump": SymbolEntry(_gauss, {"c1": 0.0, "c2": 0.0, "s": 1.0}),
    "shifted_gauss": SymbolEntry(_gauss, {"c1": 1.0, "c2": 0.5, "s": 0.8}),
    "modulated_gauss": SymbolEntry(_modulated, {"k1": 1.0, "k2": 0.5}),
    "bump": SymbolEntry(_bump, {"r": 2.0}),
    "cos_xi": SymbolEntry(lambda p: (lambda x, xi: np.cos(xi) + 0.0 * x), decays=False, taper=True),
    "bracket_weighted": SymbolEntry(
        lambda p: (lambda x, xi: 1.0 / (1.0 + x * x + xi * xi)), decays=False, taper=True),
}


def _lookup(registry: Mapping, name: str, what: str):
    if name not in registry:
        raise UnknownEntryError(f"unknown {what} {name!r}; available: {sorted(registry)}")
    return registry[name]


def symbol_entry(spec: str) -> Tuple[SymbolEntry, Dict[str, float]]:
    """Registry entry and resolved parameters of a symbol spec"""
    parsed = parse_spec(spec)
    entry = _lookup(SYMBOLS, parsed.name, "symbol")
    if parsed.args:
        raise SpecSyntaxError(f"symbol spec {spec!r} takes key=value parameters only")
    unknown = set(parsed.params) - set(entry.defaults)
    if unknown:
        raise SpecSyntaxError(f"symbol {parsed.name!r} has no parameter(s) {sorted(unknown)}")
    return entry, {**entry.defaults, **parsed.params}


def symbol_function(spec: str) -> SymbolFunc:
    entry, params = symbol_entry(spec)
    return entry.build(params)


# Sampled symbols kept at once; the least recently used go first
MAX_CACHED_SYMBOLS = 64

_symbol_cache: "OrderedDict[Tuple, SampledSymbol]" = OrderedDict()
_cache_stats = {'hits': 0, 'misses': 0, 'evictions': 0}


def clear_cache():
    """Clear the sampled-symbol cache"""
    global _symbol_cache, _cache_stats
    _symbol_cache.clear()
    _cache_stats = {'hits': 0, 'misses': 0, 'evictions': 0}


def get_cache_stats() -> Dict[str, int]:
    """
    Get sampled-symbol cache statistics.

    Returns:
        Dict with 'hits', 'misses', 'evictions', 'size'
    """
    return {
        'hits': _cache_stats['hits'],
        'misses': _cache_stats['misses'],
        'evictions': _cache_stats['evictions'],
        'size': len(_symbol_cache),
    }


def symbol_on(spec: str, grid: PhaseGrid, taper: bool = False) -> SampledSymbol:
    """
    Sample a symbol spec on a phase grid (cached, at most MAX_CACHED_SYMBOLS).

    Args:
        spec: Symbol spec
        grid: Phase grid (n = 1)
        taper: Multiply by frequency_taper in xi
    """
    key = (spec, grid.key(), taper)
    if key in _symbol_cache:
        _cache_stats['hits'] += 1
        _symbol_cache.move_to_end(key)
        return _symbol_cache[key]
    _cache_stats['misses'] += 1
    func = symbol_function(spec)
    X, XI = grid.mesh()
    vals = np.broadcast_to(func(X, XI), grid.shape).astype(complex)
    if taper:
        vals = vals * frequency_taper(XI, grid.xi.half_width)
    a = SampledSymbol(grid, vals, spec)
    _symbol_cache[key] = a
    while len(_symbol_cache) > MAX_CACHED_SYMBOLS:
        _symbol_cache.popitem(last=False)
        _cache_stats['evictions'] += 1
    return a


def weyl_symbol(spec: str, function_grid: RealGrid) -> SampledSymbol:
    """Symbol spec on the quantization grid of a function grid, tapered when it grows"""
    entry, _ = symbol_entry(spec)
    return symbol_on(spec, weyl_grid(function_grid), taper=entry.taper)


def available_symbols(decaying_only: bool = False) -> List[str]:
    return sorted(n for n, e in SYMBOLS.items() if e.decays or not decaying_only)


# Functions

def _gauss_packet(p: Mapping[str, float], x: np.ndarray) -> np.ndarray:
    x0, p0, s = p["x0"], p["p0"], p["s"]
    return (np.pi * s * s) ** -0.25 * np.exp(-((x - x0) ** 2) / (2.0 * s * s) + 1j * p0 * x)


FUNCTION_DEFAULTS: Dict[str, Dict[str, float]] = {
    "hermite": {"k": 0.0},
    "gauss": {"x0": 0.0, "p0": 0.0, "s": 1.0},
}


def function_on(spec: str, grid: RealGrid) -> SampledFunction:
    """
    Sample a function spec ('hermite:k' or 'gauss:x0=..,p0=..,s=..') on a 1-d grid.

    Raises:
        UnknownEntryError: For an unknown family
        SpecSyntaxError: For bad parameters
    """
    parsed = parse_spec(spec)
    defaults = _lookup(FUNCTION_DEFAULTS, parsed.name, "function")
    if len(parsed.args) > 1 or (parsed.args and parsed.name != "hermite"):
        raise SpecSyntaxError(f"function spec {spec!r} has unexpected positional values")
    unknown = set(parsed.params) - set(defaults)
    if unknown:
        raise SpecSyntaxError(f"function {parsed.name!r} has no parameter(s) {sorted(unknown)}")
    params = {**defaults, **parsed.params}
    if parsed.name == "hermite":
        k = parsed.args[0] if parsed.args else params["k"]
        if k < 0 or int(k) != k:
            raise SpecSyntaxError(f"Hermite index must be a non-negative integer in {spec!r}")
        return hermite_sample(int(k), grid)
    if params["s"] <= 0:
        raise SpecSyntaxError(f"width s must be positive in {spec!r}")
    return SampledFunction(grid, _gauss_packet(params, grid.axis()))


# Phases and order functions

def get_phase(name: str) -> QuadraticPhase:
    return _lookup(PHASE_FACTORIES, name, "phase")()


def available_phases() -> List[str]:
    return sorted(PHASE_FACTORIES)


def get_order(name: str, extra: Optional[Mapping[str, OrderFunction]] = None) -> OrderFunction:
    """Registered order function, or one from a loaded registry file"""
    registry = dict(registered_order_functions())
    registry.update(extra or {})
    return _lookup(registry, name, "order function")
