"""
Magnetic translations, coherent states and the rank-one decomposition.

- magnetic: LinearFormEll, magnetic translations and the Egorov check
- coherent: coherent states V_Y on Lambda_Phi
- reconstruct: the rank-one quadrature of (a^w u, v)
- effective: effective kernels and their bounds
- chain: the intermediate Schur estimate
"""

from .chain import SchurChainResult, schur_chain_check
from .coherent import (
    CoherentState,
    coherent_form,
    coherent_norms,
    coherent_state,
    coherent_weighted,
    gaussian_decay_constant,
    overlap_profile,
    overlaps_with,
)
from .effective import (
    EFFECTIVE_TABLE,
    EffectiveKernel,
    effective_kernel,
    kernel_bound_constant,
    offdiagonal_slope,
    route_discrepancy,
    tilde_q,
)
from .magnetic import (
    LinearFormEll,
    egorov_check,
    egorov_form,
    magnetic_translate,
    real_translate,
    translated_transform,
)
from .reconstruct import (
    COEFFICIENT_ROUTES,
    QuadratureNodes,
    RankOneQuadrature,
    RankOneResult,
    pullback_coefficients,
    pullback_nodes,
    pullback_symbol,
    rank_one_coefficients,
    rank_one_element,
    rank_one_reconstruct,
)

__all__ = [
    "LinearFormEll",
    "magnetic_translate",
    "translated_transform",
    "real_translate",
    "egorov_form",
    "egorov_check",
    "CoherentState",
    "coherent_form",
    "coherent_state",
    "coherent_weighted",
    "coherent_norms",
    "overlaps_with",
    "gaussian_decay_constant",
    "overlap_profile",
    "RankOneQuadrature",
    "QuadratureNodes",
    "RankOneResult",
    "rank_one_coefficients",
    "rank_one_element",
    "rank_one_reconstruct",
    "COEFFICIENT_ROUTES",
    "pullback_nodes",
    "pullback_symbol",
    "pullback_coefficients",
    "EFFECTIVE_TABLE",
    "EffectiveKernel",
    "effective_kernel",
    "route_discrepancy",
    "tilde_q",
    "kernel_bound_constant",
    "offdiagonal_slope",
    "SchurChainResult",
    "schur_chain_check",
]
