"""
FBI-Bargmann transforms with quadratic phases.

- phases: QuadraticPhase, the weight Phi, kappa and exact critical values
- transform: T, T^*, H^p_Phi and M^p norms, Pi_Phi, change of transform
- hermite: the Hermite test batch
"""

from .hermite import hermite_batch, hermite_function, hermite_sample
from .phases import (
    PHASE_FACTORIES,
    QuadraticForm,
    QuadraticPhase,
    Weight,
    bergman_constant,
    change_gap,
    change_kernel_form,
    critical_value,
    exponent_gap,
    fit_lower_constant,
    fourier_phase_form,
    ground_state_decay,
    ground_state_form,
    kappa_apply,
    kappa_inverse,
    kappa_inverse_matrix,
    kappa_matrix,
    lagrangian_point,
    lagrangian_volume,
    levi_form,
    phi_weight,
    radial_phase,
    symbol_side_phase,
    tilted_phase,
    transfer_map,
)
from .transform import (
    DEFAULT_COMPLEX_GRID,
    DEFAULT_FUNCTION_GRID,
    ComplexGrid,
    ComplexGridFunction,
    RatioBracket,
    bargmann_adjoint,
    bargmann_evaluate,
    bargmann_transform,
    calibrated_weight,
    change_of_transform,
    conjugate_transform,
    hp_norm,
    mod_norm,
    norm_ratio_bracket,
    reproducing_constant,
    reproducing_projection,
    rotation_pullback,
    transform_constant,
    unitary_fourier,
)

__all__ = [
    "QuadraticForm",
    "QuadraticPhase",
    "Weight",
    "PHASE_FACTORIES",
    "radial_phase",
    "symbol_side_phase",
    "tilted_phase",
    "critical_value",
    "phi_weight",
    "levi_form",
    "bergman_constant",
    "lagrangian_point",
    "lagrangian_volume",
    "exponent_gap",
    "fit_lower_constant",
    "kappa_apply",
    "kappa_inverse",
    "kappa_matrix",
    "kappa_inverse_matrix",
    "ground_state_form",
    "ground_state_decay",
    "fourier_phase_form",
    "change_kernel_form",
    "change_gap",
    "transfer_map",
    "ComplexGrid",
    "ComplexGridFunction",
    "DEFAULT_COMPLEX_GRID",
    "DEFAULT_FUNCTION_GRID",
    "transform_constant",
    "bargmann_transform",
    "bargmann_evaluate",
    "bargmann_adjoint",
    "hp_norm",
    "mod_norm",
    "reproducing_constant",
    "calibrated_weight",
    "reproducing_projection",
    "change_of_transform",
    "RatioBracket",
    "norm_ratio_bracket",
    "conjugate_transform",
    "unitary_fourier",
    "rotation_pullback",
    "hermite_function",
    "hermite_sample",
    "hermite_batch",
]
