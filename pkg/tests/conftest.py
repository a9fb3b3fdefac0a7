"""Pytest fixtures for Photon Splitter tests."""

import numpy as np
import pytest

from photon_splitter.config import QuadratureSettings, reload_settings
from photon_splitter.quantum.schemas import MziParams, SystemKind, SystemParams

SPLITTER_ENV = (
    "SPLITTER_QUAD_RTOL",
    "SPLITTER_QUAD_ATOL",
    "SPLITTER_QUAD_LIMIT",
    "SPLITTER_TAIL_FACTOR",
    "SPLITTER_CHI",
    "SPLITTER_DELTA_FLOOR",
    "SPLITTER_SWEEP_RESOLUTION",
    "SPLITTER_OPTIMIZE_RESOLUTION",
    "SPLITTER_REFINE_TOL",
    "SPLITTER_REFINE_MAX_ITER",
    "SPLITTER_WORKERS",
    "SPLITTER_OUTPUT_DIR",
)


@pytest.fixture
def clean_env(monkeypatch):
    """Remove every SPLITTER_* override so defaults apply."""
    for name in SPLITTER_ENV:
        monkeypatch.delenv(name, raising=False)
    reload_settings()
    yield
    reload_settings()


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Point the default output directory at a temporary path."""
    target = tmp_path / "results"
    monkeypatch.setenv("SPLITTER_OUTPUT_DIR", str(target))
    reload_settings()
    yield target
    reload_settings()


@pytest.fixture
def small_grids(monkeypatch, output_dir):
    """Shrink the default sweep and search grids for fast CLI runs."""
    monkeypatch.setenv("SPLITTER_SWEEP_RESOLUTION", "12")
    monkeypatch.setenv("SPLITTER_OPTIMIZE_RESOLUTION", "20")
    reload_settings()
    yield output_dir
    reload_settings()


@pytest.fixture
def tight_quad():
    """Quadrature tight enough for 1e-8 comparisons."""
    return QuadratureSettings(rtol=1e-10, atol=1e-14)


@pytest.fixture
def rng():
    """Seeded generator for sampled parameter points."""
    return np.random.default_rng(1234)


@pytest.fixture
def optimum_params():
    """The Fock-source optimum rate."""
    return SystemParams(gamma=0.92)


@pytest.fixture
def optimum_mzi():
    """The Fock-source optimum interferometer setting."""
    return MziParams(omega=0.303, phi=0.0)


@pytest.fixture
def entangled_params():
    """Cascaded source near the delta -> 0 limit."""
    return SystemParams(gamma=0.55, delta=1e-9, chi=1e-3, kind=SystemKind.ENTANGLED)
