"""
Outer surfaces of weylscope.

- specs: text specs ("gauss_bump:s=0.6", "hermite:2") resolved against
  the built-in symbol, function, phase and order-function registries
- cli: the weylscope command
"""

from .specs import (
    available_phases,
    available_symbols,
    function_on,
    get_order,
    get_phase,
    parse_spec,
    symbol_on,
    weyl_symbol,
)

__all__ = [
    "parse_spec",
    "symbol_on",
    "weyl_symbol",
    "function_on",
    "get_phase",
    "get_order",
    "available_symbols",
    "available_phases",
]
