"""No-jump evolution between detections."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import expm

from ..exceptions import DimensionMismatchError, InvalidParameterError, NegativeTimeError

# Below this |2 gamma - 1| the limit forms of beta and b are used.
EXCEPTIONAL_POINT_WINDOW = 1e-6


@dataclass(frozen=True)
class AmplitudeKernel:
    """
    Closed-form no-jump amplitudes of the unentangled system.

    Starting from |2g>: alpha on |2g>, beta on |1e>.
    Starting from |1g>: a on |1g>, b on |0e>.
    Starting from |0e>: c on |0e>.
    """

    alpha: float
    beta: float
    a: float
    b: float
    c: float


def _check_square(K: np.ndarray) -> int:
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionMismatchError(K.shape[0], K.shape[-1])
    return int(K.shape[0])


def propagator(K: np.ndarray, t: float) -> np.ndarray:
    """
    exp(-K t) by scaling and squaring.

    Triangular generators get their diagonal and first superdiagonal
    recomputed exactly after squaring, which keeps the defective block at
    2 gamma = kappa accurate.
    """
    if t < 0:
        raise NegativeTimeError("t", t)
    _check_square(K)
    return expm(-K * t)


def propagate(K: np.ndarray, state: np.ndarray, t: float) -> np.ndarray:
    """
    Evolve a state under the non-Hermitian generator.

    Args:
        K: Generator with H = -iK.
        state: Amplitude vector in the same basis as K.
        t: Elapsed time in units of 1/kappa.

    Returns:
        exp(-K t) @ state.

    Raises:
        NegativeTimeError: If t < 0.
        DimensionMismatchError: If state and K live on different bases.
    """
    if t < 0:
        raise NegativeTimeError("t", t)
    dimension = _check_square(K)
    vector = np.asarray(state, dtype=complex)
    if vector.shape != (dimension,):
        raise DimensionMismatchError(dimension, vector.size)
    if t == 0:
        return vector.copy()
    return propagator(K, t) @ vector


def _detuned_decay(gamma: float, t: float) -> float:
    """(e^{-t} - e^{-2 gamma t}) / (2 gamma - 1), finite through 2 gamma = 1."""
    eps = 2 * gamma - 1
    if abs(eps) < EXCEPTIONAL_POINT_WINDOW:
        x = eps * t
        return math.exp(-t) * t * (1 - x / 2 + x * x / 6)
    return -math.exp(-t) * math.expm1(-eps * t) / eps


def closed_form_amplitudes(gamma: float, t: float) -> AmplitudeKernel:
    """Evaluate the analytic no-jump amplitudes at time t (kappa = 1)."""
    if not gamma > 0:
        raise InvalidParameterError("gamma", gamma, "must be > 0")
    if t < 0:
        raise NegativeTimeError("t", t)

    decay = _detuned_decay(gamma, t)
    return AmplitudeKernel(
        alpha=math.exp(-2 * t),
        beta=-2 * math.sqrt(2 * gamma) * decay * math.exp(-t),
        a=math.exp(-t),
        b=-2 * math.sqrt(gamma) * decay,
        c=math.exp(-2 * gamma * t),
    )
