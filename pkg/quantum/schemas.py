"""Pydantic models for the photon-splitting system."""

import math
from enum import Enum

from pydantic import BaseModel, ValidationInfo, computed_field, field_validator

from ..exceptions import InvalidParameterError, InvalidPortError


class SystemKind(str, Enum):
    """Which photon-pair source feeds the atom."""

    UNENTANGLED = "unentangled"  # two-photon Fock state in the feeder cavity
    ENTANGLED = "entangled"  # cascaded three-level source atom


class CollapseConvention(str, Enum):
    """Coefficients used on the atom terms of the output collapse operators."""

    CORRECTED = "corrected"  # sqrt(2 gamma) sigma, consistent with the generator
    PRINTED = "printed"  # sqrt(2 kappa) sigma, as commonly typeset


class Port(str, Enum):
    """Interferometer output port."""

    C = "c"
    D = "d"

    @classmethod
    def parse(cls, value: "str | Port") -> "Port":
        try:
            return cls(value.lower() if isinstance(value, str) else value)
        except ValueError:
            raise InvalidPortError(str(value)) from None


class Provenance(str, Enum):
    """How an efficiency value was obtained."""

    ANALYTIC = "analytic"
    NUMERIC = "numeric"


# ============================================================================
# Parameters
# ============================================================================


class SystemParams(BaseModel):
    """Rates of the cascaded system in units of kappa (kappa = 1)."""

    gamma: float
    delta: float = 0.0
    chi: float = 1e-3
    kind: SystemKind = SystemKind.UNENTANGLED
    collapse: CollapseConvention = CollapseConvention.CORRECTED

    model_config = {"frozen": True}

    @field_validator("gamma")
    @classmethod
    def _check_gamma(cls, value: float) -> float:
        if not (math.isfinite(value) and value > 0):
            raise InvalidParameterError("gamma", value, "must be > 0")
        return value

    @field_validator("delta", "chi")
    @classmethod
    def _check_rate(cls, value: float, info: ValidationInfo) -> float:
        if not (math.isfinite(value) and value >= 0):
            raise InvalidParameterError(info.field_name or "rate", value, "must be >= 0")
        return value

    @property
    def is_entangled(self) -> bool:
        return self.kind is SystemKind.ENTANGLED


class MziParams(BaseModel):
    """Interferometer phases: splitting angle omega and input phase phi (radians)."""

    omega: float = 0.0
    phi: float = 0.0

    model_config = {"frozen": True}

    @field_validator("omega", "phi")
    @classmethod
    def _finite(cls, value: float, info: ValidationInfo) -> float:
        if not math.isfinite(value):
            raise InvalidParameterError(info.field_name or "phase", value)
        return value


# ============================================================================
# Results
# ============================================================================


class EfficiencyResult(BaseModel):
    """Splitting efficiency with its port probabilities."""

    p_cc: float
    p_dd: float
    p_cd: float
    p_dc: float
    provenance: Provenance
    params: SystemParams
    mzi: MziParams
    detected: float = 1.0  # two-detection probability before post-selection
    error: float = 0.0  # accumulated quadrature error estimate
    evaluations: int = 0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def s(self) -> float:
        return self.p_cd + self.p_dc

    @property
    def total(self) -> float:
        return self.p_cc + self.p_dd + self.p_cd + self.p_dc
