"""
weylscope: Weyl calculus, STFT symbol norms and FBI-Bargmann transforms
on finite grids.

The package turns the statements of a Weyl-calculus toolbox into
numbers that can be checked:
- Sampled symbols, order functions and their certification
- The STFT norm S~(m) and its lattice and mollified variants
- Weyl quantization, Moyal composition and Schur bounds
- FBI-Bargmann transforms for arbitrary quadratic phases
- Magnetic translations and the rank-one decomposition of a^w

Example:
    >>> from weylscope.core import PhaseGrid
    >>> from weylscope.interfaces.specs import get_order, symbol_on
    >>> from weylscope.stft import stilde_norm
    >>>
    >>> a = symbol_on("gauss_bump:s=0.6", PhaseGrid.square(1, 6.0, 64))
    >>> stilde_norm(a, get_order("one"))

Architecture:
    core holds grids, the symplectic structure and order functions.
    stft, weyl, bargmann and rankone are independent numerical layers
    on top of core. runtime runs them as verification suites and
    storage writes what a run leaves behind.

    Every quantity is computed on an explicit box; when the box is too
    small the result says so through a warning, never silently.
"""

__version__ = "0.1.0"
__author__ = "weylscope developers"

from .core import (  # noqa: E402
    OrderFunction,
    PhaseGrid,
    RealGrid,
    SampledFunction,
    SampledSymbol,
    WeylscopeError,
    WeylscopeWarning,
)

__all__ = [
    "__version__",
    "RealGrid",
    "PhaseGrid",
    "SampledFunction",
    "SampledSymbol",
    "OrderFunction",
    "WeylscopeError",
    "WeylscopeWarning",
]
