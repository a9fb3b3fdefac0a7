"""Single-mode two-photon interference through the interferometer.

A two-photon input d|11> + e|20> + f|02> on modes (a, b) is mapped to the
(c, d) output modes by the creation-operator form of the interferometer
unitary. The |11> output amplitude is the probability of the pair being split.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import UnnormalizedStateError
from ..quantum.schemas import MziParams

NORM_TOLERANCE = 1e-9
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TwoPhotonState:
    """Amplitudes of |11>, |20> and |02>."""

    d: complex
    e: complex = 0j
    f: complex = 0j

    @classmethod
    def from_split_form(cls, d: complex, g: complex) -> "TwoPhotonState":
        """d|11> + g(|20> - |02>)/sqrt(2)."""
        return cls(d=d, e=g / SQRT2, f=-g / SQRT2)

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.d) ** 2 + abs(self.e) ** 2 + abs(self.f) ** 2)

    def as_array(self) -> np.ndarray:
        return np.array([self.d, self.e, self.f], dtype=complex)

    def check_normalized(self) -> None:
        if abs(self.norm - 1.0) > NORM_TOLERANCE:
            raise UnnormalizedStateError(self.norm)


def two_photon_matrix(mzi: MziParams) -> np.ndarray:
    """Unitary on (|11>, |20>, |02>); column k is the image of input ket k."""
    w, phi = mzi.omega, mzi.phi
    s2, c2 = math.sin(2 * w), math.cos(2 * w)
    sin_sq, cos_sq = math.sin(w) ** 2, math.cos(w) ** 2
    p1, p2 = cmath.exp(1j * phi), cmath.exp(2j * phi)
    return np.array(
        [
            [p1 * c2, p2 * s2 / SQRT2, -s2 / SQRT2],
            [p1 * s2 / SQRT2, p2 * sin_sq, cos_sq],
            [-p1 * s2 / SQRT2, p2 * cos_sq, sin_sq],
        ],
        dtype=complex,
    )


def transform_two_photon(state: TwoPhotonState, mzi: MziParams) -> TwoPhotonState:
    """Map a normalized two-photon input to the output-mode amplitudes."""
    state.check_normalized()
    d, e, f = two_photon_matrix(mzi) @ state.as_array()
    return TwoPhotonState(d=complex(d), e=complex(e), f=complex(f))


def _check_pair(d: complex, g: complex) -> None:
    norm = math.sqrt(abs(d) ** 2 + abs(g) ** 2)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise UnnormalizedStateError(norm)


def amplitude_11(d: complex, g: complex, mzi: MziParams) -> complex:
    """|11> output amplitude for the input d|11> + g|->."""
    _check_pair(d, g)
    w, phi = mzi.omega, mzi.phi
    return cmath.exp(1j * phi) * (d * math.cos(2 * w) + g * math.sin(2 * w) * math.cos(phi))


def s_max(d: complex, g: complex) -> float:
    """Largest split probability over omega at phi = 0 for d|11> + g|->."""
    _check_pair(d, g)
    x = abs(d) ** 2 - abs(g) ** 2
    y = 2 * (d * g.conjugate()).real  # 2|d||g| cos(relative phase)
    return 0.5 + math.hypot(x, y) / 2


def split_probability(state: TwoPhotonState, mzi: MziParams) -> float:
    """Probability that the two photons leave through different ports."""
    return abs(transform_two_photon(state, mzi).d) ** 2


@dataclass(frozen=True)
class SplitOptimum:
    """Best interferometer setting for a single-mode input."""

    probability: float
    omega: float
    phi: float


def best_split_probability(
    state: TwoPhotonState, phi_points: int = 721
) -> SplitOptimum:
    """
    Maximize the split probability over omega analytically and over phi on a grid.

    For fixed phi the |11> amplitude is cos(2w) A + sin(2w) B, whose squared
    modulus is a pure sinusoid in 4w with a closed-form maximum.
    """
    state.check_normalized()
    best: SplitOptimum | None = None
    for phi in np.linspace(-math.pi, math.pi, phi_points):
        A = cmath.exp(1j * phi) * state.d
        B = (cmath.exp(2j * phi) * state.e - state.f) / SQRT2
        mean = (abs(A) ** 2 + abs(B) ** 2) / 2
        half_diff = (abs(A) ** 2 - abs(B) ** 2) / 2
        cross = (A * B.conjugate()).real
        probability = mean + math.hypot(half_diff, cross)
        omega = (math.atan2(cross, half_diff) / 4) % (math.pi / 2)
        if best is None or probability > best.probability:
            best = SplitOptimum(probability=probability, omega=omega, phi=float(phi))
    assert best is not None
    return best


def scan_split_probability(d: complex, g: complex, points: int = 10_000) -> float:
    """Brute-force maximum of |amplitude_11|^2 over an omega grid on [0, pi/2) at phi = 0."""
    _check_pair(d, g)
    omegas = np.arange(points) * (math.pi / 2) / points
    amplitudes = d * np.cos(2 * omegas) + g * np.sin(2 * omegas)
    return float(np.max(np.abs(amplitudes) ** 2))
