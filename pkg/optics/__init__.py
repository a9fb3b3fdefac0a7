"""Linear optics behind the atom: interferometer and two-photon interference."""

from .interferometer import mzi_matrix, output_jump_operators
from .singlemode import (
    SplitOptimum,
    TwoPhotonState,
    amplitude_11,
    best_split_probability,
    s_max,
    scan_split_probability,
    split_probability,
    transform_two_photon,
    two_photon_matrix,
)

__all__ = [
    # Interferometer
    "mzi_matrix",
    "output_jump_operators",
    # Single-mode interference
    "SplitOptimum",
    "TwoPhotonState",
    "amplitude_11",
    "best_split_probability",
    "s_max",
    "scan_split_probability",
    "split_probability",
    "transform_two_photon",
    "two_photon_matrix",
]
