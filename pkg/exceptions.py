"""Custom exceptions for Photon Splitter."""


class SplitterError(Exception):
    """Base exception for Photon Splitter."""

    pass


class ConfigurationError(SplitterError):
    """Raised when a run configuration is invalid."""

    pass


class InvalidRangeError(ConfigurationError):
    """Raised when a parameter range cannot be parsed or is out of bounds."""

    def __init__(self, spec: str, reason: str | None = None) -> None:
        self.spec = spec
        if reason:
            self.message = f"Invalid range '{spec}': {reason}"
        else:
            self.message = f"Invalid range '{spec}'"
        super().__init__(self.message)


class InvalidToleranceError(ConfigurationError):
    """Raised when a numerical tolerance is not strictly positive."""

    def __init__(self, name: str, value: float) -> None:
        self.name = name
        self.value = value
        self.message = f"Tolerance '{name}' must be > 0, got {value}"
        super().__init__(self.message)


class ModelError(SplitterError):
    """Raised when the physical model is used with invalid inputs."""

    pass


class InvalidParameterError(ModelError):
    """Raised when a physical parameter is outside its allowed range."""

    def __init__(self, name: str, value: float, reason: str | None = None) -> None:
        self.name = name
        self.value = value
        if reason:
            self.message = f"Invalid {name}={value}: {reason}"
        else:
            self.message = f"Invalid {name}={value}"
        super().__init__(self.message)


class DimensionMismatchError(ModelError):
    """Raised when operators and states live on different bases."""

    def __init__(self, expected: int, actual: int) -> None:
        self.expected = expected
        self.actual = actual
        self.message = f"Dimension mismatch: expected {expected}, got {actual}"
        super().__init__(self.message)


class UnsupportedChannelError(ModelError):
    """Raised when a jump channel is requested for a system kind that lacks it."""

    def __init__(self, kind: str) -> None:
        self.kind = kind
        self.message = f"Source decay channel is not defined for the {kind} system"
        super().__init__(self.message)


class ZeroStateError(ModelError):
    """Raised when an operation needs a nonzero state vector."""

    def __init__(self, message: str = "State vector is zero") -> None:
        self.message = message
        super().__init__(self.message)


class UnnormalizedStateError(ModelError):
    """Raised when a state must be normalized but is not."""

    def __init__(self, norm: float) -> None:
        self.norm = norm
        self.message = f"State is not normalized (norm={norm:.12g})"
        super().__init__(self.message)


class InvalidPortError(ModelError):
    """Raised when a detection port name is not c or d."""

    def __init__(self, port: str) -> None:
        self.port = port
        self.message = f"Invalid detection port: {port!r} (expected 'c' or 'd')"
        super().__init__(self.message)


class NegativeTimeError(ModelError):
    """Raised when a propagation time is negative."""

    def __init__(self, name: str, value: float) -> None:
        self.name = name
        self.value = value
        self.message = f"Time '{name}' must be >= 0, got {value}"
        super().__init__(self.message)


class NumericsError(SplitterError):
    """Raised when a numerical procedure fails."""

    pass


class QuadratureError(NumericsError):
    """Raised when adaptive quadrature does not converge within its budget."""

    def __init__(
        self, achieved_error: float, evaluations: int, reason: str | None = None
    ) -> None:
        self.achieved_error = achieved_error
        self.evaluations = evaluations
        base = (
            f"Quadrature did not converge after {evaluations} evaluations "
            f"(error estimate {achieved_error:.3e})"
        )
        self.message = f"{base}: {reason}" if reason else base
        super().__init__(self.message)


class OptimizationError(NumericsError):
    """Raised when a parameter search cannot produce a result."""

    def __init__(self, reason: str | None = None) -> None:
        if reason:
            self.message = f"Optimization failed: {reason}"
        else:
            self.message = "Optimization failed"
        super().__init__(self.message)


class OutputError(SplitterError):
    """Raised when result files cannot be written."""

    pass


class UnwritablePathError(OutputError):
    """Raised when an output path cannot be created or written."""

    def __init__(self, path: str, reason: str | None = None) -> None:
        self.path = path
        if reason:
            self.message = f"Cannot write {path}: {reason}"
        else:
            self.message = f"Cannot write {path}"
        super().__init__(self.message)
