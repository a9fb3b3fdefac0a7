"""Quantum model of the cascaded source, feeder cavity and 1D atom."""

from .model import (
    BasisDescriptor,
    ExcitationRange,
    JumpOperators,
    LadderOperators,
    basis_state,
    build_basis,
    build_generator,
    build_jump_operators,
    completeness_residual,
    excitation_number,
    initial_state,
    ladder_operators,
    number_operator,
)
from .propagator import AmplitudeKernel, closed_form_amplitudes, propagate, propagator
from .schemas import (
    CollapseConvention,
    EfficiencyResult,
    MziParams,
    Port,
    Provenance,
    SystemKind,
    SystemParams,
)

__all__ = [
    # Model
    "BasisDescriptor",
    "ExcitationRange",
    "JumpOperators",
    "LadderOperators",
    "basis_state",
    "build_basis",
    "build_generator",
    "build_jump_operators",
    "completeness_residual",
    "excitation_number",
    "initial_state",
    "ladder_operators",
    "number_operator",
    # Propagator
    "AmplitudeKernel",
    "closed_form_amplitudes",
    "propagate",
    "propagator",
    # Schemas - Enums
    "CollapseConvention",
    "Port",
    "Provenance",
    "SystemKind",
    # Schemas - Data models
    "MziParams",
    "SystemParams",
    "EfficiencyResult",
]
