"""Basis, effective generator and collapse operators of the cascaded system.

All rates are in units of the feeder-cavity rate kappa, so kappa = 1
throughout. The non-Hermitian Hamiltonian is H = -iK, and a state evolves
between detections as exp(-K t) psi.

Basis order is (source atom) x (feeder Fock n <= 2) x (two-level atom), with
ground before excited for both atoms. The unentangled system has no source
atom, giving index 2n + s; the entangled system uses 6q + 2n + s.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..exceptions import DimensionMismatchError, UnsupportedChannelError, ZeroStateError
from .schemas import CollapseConvention, SystemKind, SystemParams

logger = logging.getLogger(__name__)

FOCK_MAX = 2
ATOM_LEVELS = ("g", "e")

# Single-mode building blocks
_LOWER_FOCK = np.diag(np.sqrt(np.arange(1, FOCK_MAX + 1)), k=1).astype(complex)
_LOWER_ATOM = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e| in (g, e) order
_ID_FOCK = np.eye(FOCK_MAX + 1, dtype=complex)
_ID_ATOM = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class BasisDescriptor:
    """Ordered basis kets with their excitation numbers."""

    kind: SystemKind
    labels: tuple[str, ...]
    excitations: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        """Position of a ket, given as '2g' or '|2g⟩'."""
        key = label.strip().lstrip("|").rstrip("⟩>")
        try:
            return self.labels.index(f"|{key}⟩")
        except ValueError:
            raise KeyError(f"Unknown basis state {label!r} for {self.kind.value}") from None

    def block(self, excitation: int) -> np.ndarray:
        """Indices of the kets carrying the given excitation number."""
        return np.flatnonzero(np.asarray(self.excitations) == excitation)


class LadderOperators(NamedTuple):
    """Lowering operators embedded in the composite basis."""

    a: np.ndarray
    sigma: np.ndarray
    sigma_s: np.ndarray | None


class JumpOperators(NamedTuple):
    """Output-mode collapse operators.

    ``s_out`` is the source decay channel and exists only for the entangled
    system; use :meth:`source` to get it with a clear error otherwise.
    """

    a_out: np.ndarray
    b_out: np.ndarray
    s_out: np.ndarray | None = None

    def source(self) -> np.ndarray:
        if self.s_out is None:
            raise UnsupportedChannelError(SystemKind.UNENTANGLED.value)
        return self.s_out


@dataclass(frozen=True)
class ExcitationRange:
    """Excitation numbers present in a state's support."""

    min: int
    max: int


def build_basis(kind: SystemKind) -> BasisDescriptor:
    """Build the fixed-order basis for a system kind."""
    inner = [(n, s) for n in range(FOCK_MAX + 1) for s in ATOM_LEVELS]
    if kind is SystemKind.UNENTANGLED:
        labels = tuple(f"|{n}{s}⟩" for n, s in inner)
        excitations = tuple(n + (s == "e") for n, s in inner)
    else:
        labels = tuple(f"|{q}{n}{s}⟩" for q in ATOM_LEVELS for n, s in inner)
        excitations = tuple(
            2 * (q == "e") + n + (s == "e") for q in ATOM_LEVELS for n, s in inner
        )
    return BasisDescriptor(kind=kind, labels=labels, excitations=excitations)


def ladder_operators(kind: SystemKind) -> LadderOperators:
    """Feeder lowering a, atom lowering sigma and (entangled) source lowering sigma_s."""
    if kind is SystemKind.UNENTANGLED:
        return LadderOperators(
            a=np.kron(_LOWER_FOCK, _ID_ATOM),
            sigma=np.kron(_ID_FOCK, _LOWER_ATOM),
            sigma_s=None,
        )
    return LadderOperators(
        a=np.kron(_ID_ATOM, np.kron(_LOWER_FOCK, _ID_ATOM)),
        sigma=np.kron(_ID_ATOM, np.kron(_ID_FOCK, _LOWER_ATOM)),
        sigma_s=np.kron(_LOWER_ATOM, np.kron(_ID_FOCK, _ID_ATOM)),
    )


def number_operator(basis: BasisDescriptor) -> np.ndarray:
    """Diagonal excitation-number operator."""
    return np.diag(np.asarray(basis.excitations, dtype=complex))


def build_generator(params: SystemParams) -> np.ndarray:
    """
    Build K for H = -iK.

    Unentangled: K = a^dag a + 2 gamma sigma^dag sigma + 2 sqrt(gamma) sigma^dag a.
    Entangled adds 2 delta sigma_s^dag sigma_s + 2 sqrt(2 chi delta) (a^dag)^2 sigma_s.
    """
    ops = ladder_operators(params.kind)
    a, sigma = ops.a, ops.sigma
    ad, sd = a.conj().T, sigma.conj().T
    K = ad @ a + 2 * params.gamma * (sd @ sigma) + 2 * np.sqrt(params.gamma) * (sd @ a)

    if params.is_entangled:
        assert ops.sigma_s is not None
        ss = ops.sigma_s
        K = K + 2 * params.delta * (ss.conj().T @ ss)
        K = K + 2 * np.sqrt(2 * params.chi * params.delta) * (ad @ ad @ ss)

    logger.debug("Built %s generator (gamma=%g)", params.kind.value, params.gamma)
    return K


def build_jump_operators(params: SystemParams) -> JumpOperators:
    """
    Build the output collapse operators.

    a_out = sqrt(2 gamma) sigma + sqrt(2) a and b_out = sqrt(2 gamma) sigma.
    Under the printed convention the atom terms carry sqrt(2) instead.
    The entangled kind adds s_out = 2 sqrt(delta) sigma_s + sqrt(2 chi) a^2.
    """
    ops = ladder_operators(params.kind)
    atom_rate = 1.0 if params.collapse is CollapseConvention.PRINTED else params.gamma
    b_out = np.sqrt(2 * atom_rate) * ops.sigma
    a_out = b_out + np.sqrt(2.0) * ops.a

    s_out = None
    if params.is_entangled:
        assert ops.sigma_s is not None
        s_out = 2 * np.sqrt(params.delta) * ops.sigma_s + np.sqrt(2 * params.chi) * (ops.a @ ops.a)
    return JumpOperators(a_out=a_out, b_out=b_out, s_out=s_out)


def completeness_residual(params: SystemParams) -> np.ndarray:
    """(K + K^dag) minus the summed J^dag J over every collapse channel."""
    K = build_generator(params)
    jumps = build_jump_operators(params)
    residual = K + K.conj().T
    for J in jumps:
        if J is not None:
            residual = residual - J.conj().T @ J
    return residual


def basis_state(basis: BasisDescriptor, label: str) -> np.ndarray:
    """Unit vector on one basis ket."""
    state = np.zeros(basis.dimension, dtype=complex)
    state[basis.index(label)] = 1.0
    return state


def initial_state(kind: SystemKind) -> np.ndarray:
    """|2g> for the Fock-state source, |e0g> for the cascaded source."""
    basis = build_basis(kind)
    return basis_state(basis, "2g" if kind is SystemKind.UNENTANGLED else "e0g")


def excitation_number(
    state: np.ndarray, basis: BasisDescriptor, atol: float = 0.0
) -> ExcitationRange:
    """Report the smallest and largest excitation number in the state's support."""
    amplitudes = np.asarray(state)
    if amplitudes.shape != (basis.dimension,):
        raise DimensionMismatchError(basis.dimension, amplitudes.size)
    support = np.flatnonzero(np.abs(amplitudes) > atol)
    if support.size == 0:
        raise ZeroStateError()
    counts = np.asarray(basis.excitations)[support]
    return ExcitationRange(min=int(counts.min()), max=int(counts.max()))
