"""Two-time detection correlations behind the interferometer."""

import cmath
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from ..exceptions import (
    DimensionMismatchError,
    InvalidPortError,
    NegativeTimeError,
    UnnormalizedStateError,
)
from ..optics.interferometer import output_jump_operators
from ..quantum.model import BasisDescriptor, build_basis, build_generator, build_jump_operators
from ..quantum.propagator import closed_form_amplitudes, propagator
from ..quantum.schemas import MziParams, Port, SystemParams

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CorrelationPoint:
    """Joint detection density at (t, tau)."""

    t: float
    tau: float
    value: float


@dataclass(frozen=True)
class DetectionChannels:
    """Generator and port detection operators for one parameter point."""

    params: SystemParams
    mzi: MziParams
    basis: BasisDescriptor
    generator: np.ndarray
    c_out: np.ndarray
    d_out: np.ndarray

    @classmethod
    def build(cls, params: SystemParams, mzi: MziParams) -> "DetectionChannels":
        jumps = build_jump_operators(params)
        c_out, d_out = output_jump_operators(mzi, jumps.a_out, jumps.b_out)
        return cls(
            params=params,
            mzi=mzi,
            basis=build_basis(params.kind),
            generator=build_generator(params),
            c_out=c_out,
            d_out=d_out,
        )

    def jump(self, port: Port | str) -> np.ndarray:
        return self.c_out if Port.parse(port) is Port.C else self.d_out


def _check_initial(state: np.ndarray, dimension: int) -> np.ndarray:
    vector = np.asarray(state, dtype=complex)
    if vector.shape != (dimension,):
        raise DimensionMismatchError(dimension, vector.size)
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise UnnormalizedStateError(norm)
    return vector


def _check_times(t: float, tau: float) -> None:
    if t < 0:
        raise NegativeTimeError("t", t)
    if tau < 0:
        raise NegativeTimeError("tau", tau)


def gamma_numeric(
    params: SystemParams,
    mzi: MziParams,
    x: Port | str,
    y: Port | str,
    initial: np.ndarray,
    t: float,
    tau: float,
) -> float:
    """
    Density of a first detection at port x at time t and a second at port y at t + tau.

    Computed as ||J_y exp(-K tau) J_x exp(-K t) psi||^2.

    Raises:
        InvalidPortError: If x or y is not 'c' or 'd'.
        UnnormalizedStateError: If the initial state is not normalized.
        NegativeTimeError: If t or tau is negative.
    """
    channels = DetectionChannels.build(params, mzi)
    first, second = channels.jump(x), channels.jump(y)
    psi = _check_initial(initial, channels.basis.dimension)
    _check_times(t, tau)

    K = channels.generator
    vector = second @ (propagator(K, tau) @ (first @ (propagator(K, t) @ psi)))
    return float(np.vdot(vector, vector).real)


def correlation_grid(
    params: SystemParams,
    mzi: MziParams,
    x: Port | str,
    y: Port | str,
    initial: np.ndarray,
    times: Iterable[float],
    taus: Iterable[float],
) -> list[CorrelationPoint]:
    """Numeric correlation over a (t, tau) grid, reusing the operators per point."""
    channels = DetectionChannels.build(params, mzi)
    first, second = channels.jump(x), channels.jump(y)
    psi = _check_initial(initial, channels.basis.dimension)
    K = channels.generator
    tau_list = list(taus)

    points: list[CorrelationPoint] = []
    for t in times:
        _check_times(t, 0.0)
        after_first = first @ (propagator(K, t) @ psi)
        for tau in tau_list:
            _check_times(t, tau)
            vector = second @ (propagator(K, tau) @ after_first)
            points.append(CorrelationPoint(t=t, tau=tau, value=float(np.vdot(vector, vector).real)))
    return points


def gamma_analytic(gamma: float, mzi: MziParams, direction: str, t: float, tau: float) -> float:
    """
    Closed-form cd or dc correlation of the unentangled system (kappa = 1).

    ``direction="cd"`` is a c-port detection followed by a d-port detection.
    """
    direction = direction.lower()
    if direction not in ("cd", "dc"):
        raise InvalidPortError(direction)
    _check_times(t, tau)

    first = closed_form_amplitudes(gamma, t)
    second = closed_form_amplitudes(gamma, tau)
    alpha, beta = first.alpha, first.beta
    a, b, c = second.a, second.b, second.c

    w, phi = mzi.omega, mzi.phi
    sin_w, cos_w = math.sin(w), math.cos(w)
    phase = cmath.exp(-1j * phi)
    root_g = math.sqrt(gamma)
    root_2 = math.sqrt(2.0)

    if direction == "cd":
        amplitude = c * phase * (phase * cos_w - sin_w) * sin_w * root_g * beta + (
            b * (phase * cos_w - sin_w) * root_g + a * cos_w * phase
        ) * (phase * sin_w * root_2 * alpha + (cos_w + phase * sin_w) * root_g * beta)
    else:
        amplitude = c * cos_w * phase * (cos_w + phase * sin_w) * root_g * beta + (
            b * (cos_w + phase * sin_w) * root_g + a * phase * sin_w
        ) * (cos_w * phase * root_2 * alpha + (phase * cos_w - sin_w) * root_g * beta)

    return 4 * abs(amplitude) ** 2
