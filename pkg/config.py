"""Configuration and settings for Photon Splitter."""

import math
import os
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Literal

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationInfo, field_validator

from .exceptions import InvalidRangeError, InvalidToleranceError

# Load .env file from current directory or parent directories
load_dotenv()


def _env_float(name: str, default: str) -> float:
    return float(os.getenv(name, default))


def _env_int(name: str, default: str) -> int:
    return int(os.getenv(name, default))


class Settings(BaseModel):
    """Application settings loaded from environment variables."""

    # Quadrature
    quad_rtol: float = Field(default_factory=lambda: _env_float("SPLITTER_QUAD_RTOL", "1e-7"))
    quad_atol: float = Field(default_factory=lambda: _env_float("SPLITTER_QUAD_ATOL", "1e-13"))
    quad_limit: int = Field(default_factory=lambda: _env_int("SPLITTER_QUAD_LIMIT", "2000"))
    tail_factor: float = Field(default_factory=lambda: _env_float("SPLITTER_TAIL_FACTOR", "20"))

    # Entangled source
    chi: float = Field(default_factory=lambda: _env_float("SPLITTER_CHI", "1e-3"))
    delta_floor: float = Field(
        default_factory=lambda: _env_float("SPLITTER_DELTA_FLOOR", "1e-9")
    )

    # Search
    sweep_resolution: int = Field(
        default_factory=lambda: _env_int("SPLITTER_SWEEP_RESOLUTION", "200")
    )
    optimize_resolution: int = Field(
        default_factory=lambda: _env_int("SPLITTER_OPTIMIZE_RESOLUTION", "40")
    )
    refine_tol: float = Field(default_factory=lambda: _env_float("SPLITTER_REFINE_TOL", "1e-10"))
    refine_max_iter: int = Field(
        default_factory=lambda: _env_int("SPLITTER_REFINE_MAX_ITER", "20000")
    )

    # Concurrency
    workers: int = Field(
        default_factory=lambda: _env_int("SPLITTER_WORKERS", "4"), ge=1, validate_default=True
    )

    # Paths
    output_dir: Path = Field(
        default_factory=lambda: Path(os.getenv("SPLITTER_OUTPUT_DIR", "splitter-output"))
    )

    model_config = {"extra": "ignore"}

    def ensure_dirs(self) -> None:
        """Create the output directory if it doesn't exist."""
        self.output_dir.mkdir(parents=True, exist_ok=True)


@lru_cache
def get_settings() -> Settings:
    """
    Get the global settings instance (cached).

    Settings are loaded from environment variables:
    - SPLITTER_QUAD_RTOL / SPLITTER_QUAD_ATOL: quadrature tolerances
    - SPLITTER_QUAD_LIMIT: maximum adaptive subintervals
    - SPLITTER_TAIL_FACTOR: truncation T = factor / slowest decay rate
    - SPLITTER_CHI: left-mirror bandwidth for the entangled numeric path
    - SPLITTER_DELTA_FLOOR: delta substituted for the delta -> 0 numeric limit
    - SPLITTER_SWEEP_RESOLUTION / SPLITTER_OPTIMIZE_RESOLUTION: grid sizes
    - SPLITTER_REFINE_TOL / SPLITTER_REFINE_MAX_ITER: simplex refinement
    - SPLITTER_WORKERS: threads used to evaluate sweep rows
    - SPLITTER_OUTPUT_DIR: where result files go when --out is not given
    """
    return Settings()


def reload_settings() -> Settings:
    """Force reload settings (clears cache)."""
    get_settings.cache_clear()
    return get_settings()


# ============================================================================
# Per-run configuration
# ============================================================================


class QuadratureSettings(BaseModel):
    """Controls for the adaptive detection-probability integrals."""

    rtol: float = 1e-7
    atol: float = 1e-13
    limit: int = Field(default=2000, ge=1)
    tail_factor: float = 20.0
    method: Literal["quadrature", "lyapunov"] = "quadrature"

    model_config = {"frozen": True}

    @classmethod
    def from_settings(
        cls, settings: Settings | None = None, **overrides: object
    ) -> "QuadratureSettings":
        """Build quadrature settings from the environment, with optional overrides."""
        settings = settings or get_settings()
        values: dict[str, object] = {
            "rtol": settings.quad_rtol,
            "atol": settings.quad_atol,
            "limit": settings.quad_limit,
            "tail_factor": settings.tail_factor,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(values)

    @field_validator("rtol", "tail_factor")
    @classmethod
    def _positive(cls, value: float, info: ValidationInfo) -> float:
        if not value > 0:
            raise InvalidToleranceError(info.field_name or "tolerance", value)
        return value

    @field_validator("atol")
    @classmethod
    def _non_negative(cls, value: float) -> float:
        if value < 0:
            raise InvalidToleranceError("atol", value)
        return value


class OutputFormat(str, Enum):
    """Data file formats."""

    CSV = "csv"
    JSON = "json"


class RangeSpec(BaseModel):
    """
    A parameter axis given on the command line.

    Accepted forms are ``a:b:n`` (n points between a and b), a single value
    ``v``, or a comma separated list ``v1,v2,...``.
    """

    text: str
    values: tuple[float, ...] = ()
    lower: float | None = None
    upper: float | None = None
    count: int | None = None

    @classmethod
    def parse(cls, text: str) -> "RangeSpec":
        """Parse a range specification string."""
        raw = text.strip()
        if not raw:
            raise InvalidRangeError(text, "empty")
        try:
            if ":" in raw:
                parts = raw.split(":")
                if len(parts) != 3:
                    raise InvalidRangeError(text, "expected a:b:n")
                lower, upper, count = float(parts[0]), float(parts[1]), int(parts[2])
                if count < 1:
                    raise InvalidRangeError(text, "n must be >= 1")
                if not upper > lower:
                    raise InvalidRangeError(text, "b must be greater than a")
                return cls(text=raw, lower=lower, upper=upper, count=count)
            values = tuple(float(v) for v in raw.split(","))
        except ValueError as e:
            raise InvalidRangeError(text, str(e)) from None
        if not all(math.isfinite(v) for v in values):
            raise InvalidRangeError(text, "values must be finite")
        return cls(text=raw, values=values)

    @property
    def is_interval(self) -> bool:
        return self.count is not None

    def points(self, closed: Literal["left", "right"] = "left") -> np.ndarray:
        """
        Grid points for this axis.

        Intervals are half-open: ``closed="left"`` gives [a, b) and
        ``closed="right"`` gives (a, b], each with n points.
        """
        if self.count is None or self.lower is None or self.upper is None:
            return np.array(self.values, dtype=float)
        step = (self.upper - self.lower) / self.count
        offset = 0 if closed == "left" else 1
        return self.lower + step * (np.arange(self.count) + offset)


class RunConfig(BaseModel):
    """Echoable configuration of a single CLI run."""

    command: str
    kind: str = "unentangled"
    gamma: str | None = None
    omega: str | None = None
    phi: float = 0.0
    delta: float = 0.0
    chi: float | None = None
    tol: float | None = None
    resolution: int | None = None
    spot_checks: int = 0
    out: str | None = None
    format: OutputFormat = OutputFormat.CSV

    def echo(self) -> dict[str, object]:
        """Serializable form embedded in every output file."""
        return self.model_dump(mode="json")
