"""Grid scan and simplex refinement of the splitting efficiency."""

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ..config import get_settings
from ..exceptions import InvalidRangeError, OptimizationError, SplitterError
from ..quantum.schemas import MziParams, SystemKind
from .efficiency import (
    splitting_efficiency_analytic_entangled,
    splitting_efficiency_analytic_unentangled,
)

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]

# Relative margin a grid value must beat the incumbent by.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Axis:
    """One search dimension; ``closed`` says which ends belong to the grid."""

    name: str
    lower: float
    upper: float
    closed: Literal["left", "right", "both"] = "both"

    @property
    def is_fixed(self) -> bool:
        return self.lower == self.upper

    def grid(self, resolution: int) -> np.ndarray:
        if self.is_fixed:
            return np.array([self.lower])
        if resolution < 2:
            raise InvalidRangeError(f"{self.name}:{resolution}", "need at least 2 points per axis")
        if self.closed == "both":
            return np.linspace(self.lower, self.upper, resolution)
        step = (self.upper - self.lower) / resolution
        offset = 0 if self.closed == "left" else 1
        return self.lower + step * (np.arange(resolution) + offset)

    @classmethod
    def fixed(cls, name: str, value: float) -> "Axis":
        return cls(name=name, lower=value, upper=value)


def default_axes(kind: SystemKind) -> list[Axis]:
    """gamma in (0.01, 3], omega in [0, pi/2), and phi in [-pi, pi] for the Fock source."""
    axes = [
        Axis("gamma", 0.01, 3.0, closed="right"),
        Axis("omega", 0.0, math.pi / 2, closed="left"),
    ]
    if kind is SystemKind.UNENTANGLED:
        axes.append(Axis("phi", -math.pi, math.pi, closed="both"))
    return axes


@dataclass
class GridScanResult:
    """Best grid point plus bookkeeping."""

    point: np.ndarray
    value: float
    evaluations: int
    failures: list[tuple[tuple[float, ...], str]] = field(default_factory=list)


@dataclass
class Optimum:
    """Locally refined maximum."""

    point: np.ndarray
    value: float
    names: tuple[str, ...]
    evaluations: int
    iterations: int
    converged: bool
    budget_exceeded: bool = False
    message: str = ""

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(self.names, self.point, strict=True)}


def grid_scan(
    objective: Objective, axes: Sequence[Axis], resolution: int | Sequence[int]
) -> GridScanResult:
    """
    Evaluate the objective on a tensor grid and return its maximum.

    Points are visited in ascending axis order and only a value larger than
    the incumbent by more than TIE_RTOL replaces it, so ties (including ties
    broken by rounding alone) resolve toward smaller coordinates.
    Points where the objective raises or returns NaN are logged and skipped.

    Raises:
        OptimizationError: If every grid point failed.
    """
    if isinstance(resolution, int):
        resolution = [resolution] * len(axes)
    grids = [axis.grid(n) for axis, n in zip(axes, resolution, strict=True)]

    best_point: np.ndarray | None = None
    best_value = -math.inf
    evaluations = 0
    failures: list[tuple[tuple[float, ...], str]] = []

    for coords in itertools.product(*grids):
        point = np.array(coords, dtype=float)
        evaluations += 1
        try:
            value = float(objective(point))
        except (SplitterError, ArithmeticError, ValueError) as e:
            failures.append((tuple(coords), str(e)))
            logger.warning("Skipping grid point %s: %s", coords, e)
            continue
        if math.isnan(value):
            failures.append((tuple(coords), "objective returned NaN"))
            logger.warning("Skipping grid point %s: objective returned NaN", coords)
            continue
        if best_point is None or value > best_value + TIE_RTOL * max(1.0, abs(best_value)):
            best_point, best_value = point, value

    if best_point is None:
        raise OptimizationError(f"all {evaluations} grid points failed")
    logger.info("Grid scan: best %.12g at %s (%d points)", best_value, best_point, evaluations)
    return GridScanResult(
        point=best_point, value=best_value, evaluations=evaluations, failures=failures
    )


def refine(
    objective: Objective,
    start: Sequence[float],
    axes: Sequence[Axis],
    tol: float | None = None,
    max_iter: int | None = None,
) -> Optimum:
    """
    Maximize locally with a bounded Nelder-Mead simplex from ``start``.

    Fixed axes stay at their value. The returned value is the objective
    re-evaluated at the returned point and is never below the start value.
    """
    settings = get_settings()
    tol = settings.refine_tol if tol is None else tol
    max_iter = settings.refine_max_iter if max_iter is None else max_iter

    x0 = np.asarray(start, dtype=float)
    free = [i for i, axis in enumerate(axes) if not axis.is_fixed]
    names = tuple(axis.name for axis in axes)
    start_value = float(objective(x0))

    if not free:
        return Optimum(x0, start_value, names, evaluations=1, iterations=0, converged=True)

    def expand(x_free: np.ndarray) -> np.ndarray:
        point = x0.copy()
        point[free] = x_free
        return point

    result = minimize(
        lambda x: -objective(expand(x)),
        x0[free],
        method="Nelder-Mead",
        bounds=[(axes[i].lower, axes[i].upper) for i in free],
        options={"xatol": tol, "fatol": tol, "maxiter": max_iter, "maxfev": 2 * max_iter},
    )
    point = expand(result.x)
    value = float(objective(point))
    budget_exceeded = result.status in (1, 2)
    if budget_exceeded:
        logger.warning("Simplex refinement hit its budget: %s", result.message)

    if value < start_value:
        logger.info("Refinement did not improve on the start point; keeping it")
        point, value = x0, start_value

    return Optimum(
        point=point,
        value=value,
        names=names,
        evaluations=int(result.nfev) + 2,
        iterations=int(result.nit),
        converged=bool(result.success),
        budget_exceeded=budget_exceeded,
        message=str(result.message),
    )


def maximize_scalar(
    objective: Callable[[float], float], axis: Axis, tol: float = 1e-10
) -> Optimum:
    """Bounded one-dimensional maximization (golden section with parabolic steps)."""
    result = minimize_scalar(
        lambda x: -objective(x),
        bounds=(axis.lower, axis.upper),
        method="bounded",
        options={"xatol": tol},
    )
    x = float(result.x)
    return Optimum(
        point=np.array([x]),
        value=float(objective(x)),
        names=(axis.name,),
        evaluations=int(result.nfev) + 1,
        iterations=int(getattr(result, "nit", 0)),
        converged=bool(result.success),
        message=str(getattr(result, "message", "")),
    )


def analytic_objective(kind: SystemKind, delta: float = 0.0) -> Objective:
    """
    Closed-form S as a function of a search point.

    The point is (gamma, omega, phi) for the Fock source and (gamma, omega)
    for the cascaded source.
    """
    if kind is SystemKind.UNENTANGLED:

        def unentangled(point: np.ndarray) -> float:
            gamma, omega, phi = point
            return splitting_efficiency_analytic_unentangled(
                float(gamma), MziParams(omega=float(omega), phi=float(phi))
            )

        return unentangled

    def entangled(point: np.ndarray) -> float:
        gamma, omega = point
        return splitting_efficiency_analytic_entangled(float(gamma), delta, float(omega))

    return entangled


@dataclass
class SearchReport:
    """Grid scan followed by refinement from its best point."""

    scan: GridScanResult
    optimum: Optimum

    @property
    def evaluations(self) -> int:
        return self.scan.evaluations + self.optimum.evaluations


def optimize_efficiency(
    objective: Objective,
    axes: Sequence[Axis],
    resolution: int | Sequence[int],
    tol: float | None = None,
    max_iter: int | None = None,
) -> SearchReport:
    """Grid scan, then simplex refinement from the best grid point."""
    scan = grid_scan(objective, axes, resolution)
    optimum = refine(objective, scan.point, axes, tol=tol, max_iter=max_iter)
    return SearchReport(scan=scan, optimum=optimum)
