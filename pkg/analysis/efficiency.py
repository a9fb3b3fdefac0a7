"""Port probabilities and splitting efficiency.

The double integral of a correlation over t and tau factorizes through the
second-jump Gramian

    Y_y = int_0^inf exp(-K^dag tau) J_y^dag J_y exp(-K tau) dtau,

so that P_xy = int_0^inf v(t)^dag J_x^dag Y_y J_x v(t) dt with
v(t) = exp(-K t) psi. Before the first detection the state lives in the
two-excitation block and between detections in the one-excitation block, so
both integrals are taken on those blocks with their own truncation times.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import solve_continuous_lyapunov

from ..config import QuadratureSettings, get_settings
from ..exceptions import InvalidParameterError, QuadratureError
from ..quantum.model import initial_state
from ..quantum.propagator import propagator
from ..quantum.schemas import EfficiencyResult, MziParams, Port, Provenance, SystemParams
from .correlations import DetectionChannels

logger = logging.getLogger(__name__)

PORT_PAIRS = ((Port.C, Port.C), (Port.C, Port.D), (Port.D, Port.C), (Port.D, Port.D))


@dataclass(frozen=True)
class PortProbabilities:
    """Raw two-detection probabilities for every ordered port pair."""

    values: dict[tuple[Port, Port], float]
    error: float
    evaluations: int

    def __getitem__(self, pair: tuple[Port, Port]) -> float:
        return self.values[pair]

    @property
    def total(self) -> float:
        return sum(self.values.values())


@dataclass(frozen=True)
class _Blocks:
    """Generator and jump operators restricted to the excitation blocks."""

    K2: np.ndarray
    K1: np.ndarray
    psi: np.ndarray
    first: dict[Port, np.ndarray]  # two-excitation -> one-excitation
    second: dict[Port, np.ndarray]  # one-excitation -> vacuum

    @classmethod
    def build(cls, channels: DetectionChannels, state: np.ndarray) -> "_Blocks":
        basis = channels.basis
        two, one, zero = basis.block(2), basis.block(1), basis.block(0)
        K = channels.generator
        first = {p: channels.jump(p)[np.ix_(one, two)] for p in Port}
        second = {p: channels.jump(p)[np.ix_(zero, one)] for p in Port}
        return cls(
            K2=K[np.ix_(two, two)],
            K1=K[np.ix_(one, one)],
            psi=np.asarray(state, dtype=complex)[two],
            first=first,
            second=second,
        )


def _block_rates(K_block: np.ndarray) -> list[float]:
    # K is triangular in the fixed basis order, so its decay rates are on the diagonal.
    rates = [float(r) for r in np.real(np.diag(K_block))]
    if min(rates) <= 0:
        raise InvalidParameterError("rate", min(rates), "every populated level must decay")
    return rates


def _integrate(
    integrand: Callable[[float], np.ndarray], rates: list[float], quad: QuadratureSettings
) -> tuple[np.ndarray, float, int]:
    """Adaptive quadrature on [0, T] split at tail_factor / rate for every block rate."""
    breaks = sorted({quad.tail_factor / r for r in rates})
    T = breaks[-1]
    result, error, info = quad_vec(
        integrand,
        0.0,
        T,
        epsabs=quad.atol,
        epsrel=quad.rtol,
        limit=quad.limit,
        points=breaks[:-1] or None,
        full_output=True,
    )
    if not info.success:
        raise QuadratureError(float(error), int(info.neval), str(info.message))

    tail = float(np.linalg.norm(integrand(T))) / (2 * min(rates))
    if tail > max(quad.atol, quad.rtol * float(np.linalg.norm(result))):
        logger.warning("Truncation tail %.3e exceeds tolerance at T=%.3g", tail, T)
    logger.debug("quad_vec on [0, %.3g]: %d evaluations, error %.3e", T, info.neval, error)
    return np.asarray(result), float(error), int(info.neval)


def _gramians_quadrature(
    blocks: _Blocks, quad: QuadratureSettings
) -> tuple[dict[Port, np.ndarray], float, int]:
    K1 = blocks.K1
    n = K1.shape[0]
    loads = {p: J.conj().T @ J for p, J in blocks.second.items()}

    def integrand(tau: float) -> np.ndarray:
        E = propagator(K1, tau)
        parts = [(E.conj().T @ Q @ E).ravel() for Q in loads.values()]
        stacked = np.concatenate(parts)
        return np.concatenate([stacked.real, stacked.imag])

    values, error, evaluations = _integrate(integrand, _block_rates(K1), quad)
    half = values.size // 2
    flat = values[:half] + 1j * values[half:]
    gramians = {p: flat[i * n * n : (i + 1) * n * n].reshape(n, n) for i, p in enumerate(loads)}
    return gramians, error, evaluations


def _probabilities_quadrature(blocks: _Blocks, quad: QuadratureSettings) -> PortProbabilities:
    gramians, inner_error, inner_evals = _gramians_quadrature(blocks, quad)
    K2, psi = blocks.K2, blocks.psi

    def integrand(t: float) -> np.ndarray:
        v = propagator(K2, t) @ psi
        out = []
        for x, y in PORT_PAIRS:
            w = blocks.first[x] @ v
            out.append(np.vdot(w, gramians[y] @ w).real)
        return np.array(out)

    values, outer_error, outer_evals = _integrate(integrand, _block_rates(K2), quad)
    # The outer integrand is linear in the Gramians, so their error scales by the first-jump flux.
    flux = float(np.linalg.norm(psi)) ** 2 * max(
        float(np.linalg.norm(J, 2)) ** 2 for J in blocks.first.values()
    )
    error = outer_error + inner_error * flux / (2 * min(_block_rates(K2)))
    return PortProbabilities(
        values={pair: float(v) for pair, v in zip(PORT_PAIRS, values, strict=True)},
        error=error,
        evaluations=inner_evals + outer_evals,
    )


def _probabilities_lyapunov(blocks: _Blocks) -> PortProbabilities:
    _block_rates(blocks.K1)
    _block_rates(blocks.K2)
    gramians = {
        p: solve_continuous_lyapunov(blocks.K1.conj().T, J.conj().T @ J)
        for p, J in blocks.second.items()
    }
    values = {}
    for x, y in PORT_PAIRS:
        J = blocks.first[x]
        Z = solve_continuous_lyapunov(blocks.K2.conj().T, J.conj().T @ gramians[y] @ J)
        values[(x, y)] = float(np.vdot(blocks.psi, Z @ blocks.psi).real)
    return PortProbabilities(values=values, error=0.0, evaluations=len(gramians) + len(values))


def port_probabilities(
    params: SystemParams,
    mzi: MziParams,
    quad: QuadratureSettings | None = None,
    state: np.ndarray | None = None,
) -> PortProbabilities:
    """
    Integrate every correlation over t and tau.

    Args:
        params: System rates and kind.
        mzi: Interferometer setting.
        quad: Quadrature controls; defaults come from the environment.
        state: Initial state; defaults to the kind's two-excitation source state.

    Returns:
        Unnormalized probabilities for (c,c), (c,d), (d,c) and (d,d).

    Raises:
        QuadratureError: If the adaptive quadrature exhausts its budget.
    """
    quad = quad or QuadratureSettings.from_settings()
    channels = DetectionChannels.build(params, mzi)
    psi = initial_state(params.kind) if state is None else state
    blocks = _Blocks.build(channels, psi)

    if quad.method == "lyapunov":
        return _probabilities_lyapunov(blocks)
    return _probabilities_quadrature(blocks, quad)


def port_probability(
    params: SystemParams,
    mzi: MziParams,
    x: Port | str,
    y: Port | str,
    quad: QuadratureSettings | None = None,
) -> float:
    """Probability of a first detection at port x followed by a second at port y."""
    return port_probabilities(params, mzi, quad)[(Port.parse(x), Port.parse(y))]


def _post_selected(probabilities: PortProbabilities) -> dict[tuple[Port, Port], float]:
    total = probabilities.total
    return {pair: value / total for pair, value in probabilities.values.items()}


def splitting_efficiency_numeric(
    params: SystemParams,
    mzi: MziParams,
    quad: QuadratureSettings | None = None,
) -> EfficiencyResult:
    """
    Splitting efficiency from the quantum-jump pipeline.

    For the entangled source the four probabilities are normalized over the
    monitored ports and extrapolated to chi -> 0 from chi and chi/2.
    """
    if not params.is_entangled:
        probs = port_probabilities(params, mzi, quad)
        return EfficiencyResult(
            p_cc=probs[(Port.C, Port.C)],
            p_cd=probs[(Port.C, Port.D)],
            p_dc=probs[(Port.D, Port.C)],
            p_dd=probs[(Port.D, Port.D)],
            provenance=Provenance.NUMERIC,
            params=params,
            mzi=mzi,
            detected=probs.total,
            error=probs.error,
            evaluations=probs.evaluations,
        )

    if not params.delta > 0:
        raise InvalidParameterError(
            "delta",
            params.delta,
            f"numeric entangled path needs delta > 0 (try {get_settings().delta_floor:g})",
        )
    if not params.chi > 0:
        raise InvalidParameterError("chi", params.chi, "must be > 0 for the numeric path")

    full = port_probabilities(params, mzi, quad)
    half = port_probabilities(params.model_copy(update={"chi": params.chi / 2}), mzi, quad)
    full_norm, half_norm = _post_selected(full), _post_selected(half)
    extrapolated = {pair: 2 * half_norm[pair] - full_norm[pair] for pair in PORT_PAIRS}
    logger.debug(
        "Richardson step on S: chi=%g -> %.12g, chi/2 -> %.12g",
        params.chi,
        full_norm[(Port.C, Port.D)] + full_norm[(Port.D, Port.C)],
        half_norm[(Port.C, Port.D)] + half_norm[(Port.D, Port.C)],
    )

    return EfficiencyResult(
        p_cc=extrapolated[(Port.C, Port.C)],
        p_cd=extrapolated[(Port.C, Port.D)],
        p_dc=extrapolated[(Port.D, Port.C)],
        p_dd=extrapolated[(Port.D, Port.D)],
        provenance=Provenance.NUMERIC,
        params=params,
        mzi=mzi,
        detected=2 * half.total - full.total,
        error=2 * half.error / half.total + full.error / full.total,
        evaluations=full.evaluations + half.evaluations,
    )


def splitting_efficiency_analytic_unentangled(gamma_over_kappa: float, mzi: MziParams) -> float:
    """Closed-form splitting efficiency for the two-photon Fock-state source."""
    g = gamma_over_kappa
    if not g > 0:
        raise InvalidParameterError("gamma", g, "must be > 0")
    w, phi = mzi.omega, mzi.phi

    numerator = (
        8 * g**3
        + 16 * g**2 * math.sin(2 * w) ** 2 * math.cos(2 * phi)
        + 32 * g**2 * math.sin(4 * w) * math.cos(phi)
        + 44 * g**2
        + (2 * g * (2 * g * (5 - 2 * g) + 5) - 3) * math.cos(4 * w)
        + 38 * g
        + 3
    )
    denominator = 4 * (2 * g + 1) ** 2 * (2 * g + 3)
    return numerator / denominator


def splitting_efficiency_analytic_entangled(gamma: float, delta: float, omega: float) -> float:
    """Closed-form splitting efficiency for the cascaded source at phi = 0."""
    g, d = gamma, delta
    if not g > 0:
        raise InvalidParameterError("gamma", g, "must be > 0")
    if d < 0:
        raise InvalidParameterError("delta", d, "must be >= 0")

    numerator = (
        32 * g**2 * (2 * g + 2 * d + 3) * math.sin(4 * omega)
        + (
            -4 * g * (4 * g * (g**2 + g - 2) + 2 * g * (2 * g - 3) * d - 5 * d - 7)
            - 6 * d
            - 3
        )
        * math.cos(4 * omega)
        + 4 * g * (2 * g * (2 * g + 13) * d + 4 * g * (g * (g + 5) + 8) + 19 * d + 17)
        + 6 * d
        + 3
    )
    denominator = 4 * (2 * g + 1) ** 2 * (2 * g + 3) * (2 * g + 2 * d + 1)
    return numerator / denominator


def analytic_efficiency(params: SystemParams, mzi: MziParams) -> float:
    """Closed-form S for either source kind (phi is ignored for the cascaded source)."""
    if params.is_entangled:
        return splitting_efficiency_analytic_entangled(params.gamma, params.delta, mzi.omega)
    return splitting_efficiency_analytic_unentangled(params.gamma, mzi)
