"""Correlations, efficiencies, parameter search and invariant checks."""

from .correlations import (
    CorrelationPoint,
    DetectionChannels,
    correlation_grid,
    gamma_analytic,
    gamma_numeric,
)
from .efficiency import (
    PortProbabilities,
    analytic_efficiency,
    port_probabilities,
    port_probability,
    splitting_efficiency_analytic_entangled,
    splitting_efficiency_analytic_unentangled,
    splitting_efficiency_numeric,
)
from .optimizer import (
    Axis,
    GridScanResult,
    Optimum,
    SearchReport,
    analytic_objective,
    default_axes,
    grid_scan,
    maximize_scalar,
    optimize_efficiency,
    refine,
)
from .verification import CheckResult, VerificationReport, run_verification

__all__ = [
    # Correlations
    "CorrelationPoint",
    "DetectionChannels",
    "correlation_grid",
    "gamma_analytic",
    "gamma_numeric",
    # Efficiency
    "PortProbabilities",
    "analytic_efficiency",
    "port_probabilities",
    "port_probability",
    "splitting_efficiency_analytic_entangled",
    "splitting_efficiency_analytic_unentangled",
    "splitting_efficiency_numeric",
    # Optimizer
    "Axis",
    "GridScanResult",
    "Optimum",
    "SearchReport",
    "analytic_objective",
    "default_axes",
    "grid_scan",
    "maximize_scalar",
    "optimize_efficiency",
    "refine",
    # Verification
    "CheckResult",
    "VerificationReport",
    "run_verification",
]
