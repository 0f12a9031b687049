"""
Phase-space substrate of weylscope.

This package contains the building blocks every other module consumes:
- RealGrid / PhaseGrid: uniform grids and their quadrature weights
- SampledFunction / SampledSymbol: immutable sampled data
- SymplecticStructure, symplectic_form, q_map: linear algebra on E = T*R^n
- OrderFunction and its certification
- Lattice / WindowSpec and the partition-of-unity check
- The error hierarchy and warning categories

Philosophy:
    Everything here is immutable after construction and pure.
    Grids are validated when built, never when used.
"""

from .errors import (
    AliasingWarning,
    BoundaryMassWarning,
    CertificationError,
    ConfigError,
    DimensionError,
    GridError,
    GrowthWarning,
    PhaseError,
    RegistryError,
    ReportError,
    ShiftOutOfBoxError,
    SingularFormError,
    SpecSyntaxError,
    TruncationWarning,
    UnknownEntryError,
    WeylscopeError,
    WeylscopeWarning,
)
from .grids import PhaseGrid, RealGrid, SampledFunction, SampledSymbol, japanese_bracket
from .lattice import Lattice, WindowSpec, partition_check
from .order_functions import OrderFunction, certify_order_function, check_order_function
from .symplectic import SymplecticStructure, q_inverse, q_map, symplectic_form

__all__ = [
    "RealGrid",
    "PhaseGrid",
    "SampledFunction",
    "SampledSymbol",
    "japanese_bracket",
    "SymplecticStructure",
    "symplectic_form",
    "q_map",
    "q_inverse",
    "OrderFunction",
    "certify_order_function",
    "check_order_function",
    "Lattice",
    "WindowSpec",
    "partition_check",
    "WeylscopeError",
    "GridError",
    "DimensionError",
    "CertificationError",
    "SingularFormError",
    "PhaseError",
    "ShiftOutOfBoxError",
    "RegistryError",
    "UnknownEntryError",
    "SpecSyntaxError",
    "ConfigError",
    "ReportError",
    "WeylscopeWarning",
    "BoundaryMassWarning",
    "AliasingWarning",
    "TruncationWarning",
    "GrowthWarning",
]
