"""Mach-Zehnder unitary acting on the atom's output modes."""

import cmath
import math

import numpy as np

from ..exceptions import DimensionMismatchError
from ..quantum.schemas import MziParams


def mzi_matrix(mzi: MziParams) -> np.ndarray:
    """
    2x2 unitary taking (a_out, b_out) to (c_out, d_out).

    [[e^{i phi} sin w, cos w], [e^{i phi} cos w, -sin w]]
    """
    phase = cmath.exp(1j * mzi.phi)
    s, c = math.sin(mzi.omega), math.cos(mzi.omega)
    return np.array([[phase * s, c], [phase * c, -s]], dtype=complex)


def output_jump_operators(
    mzi: MziParams, a_out: np.ndarray, b_out: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Detection operators behind the interferometer's two output ports."""
    if a_out.shape != b_out.shape:
        raise DimensionMismatchError(a_out.shape[0], b_out.shape[0])
    u = mzi_matrix(mzi)
    c_out = u[0, 0] * a_out + u[0, 1] * b_out
    d_out = u[1, 0] * a_out + u[1, 1] * b_out
    return c_out, d_out
