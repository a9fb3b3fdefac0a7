"""Tests for two-time detection correlations."""

import math

import numpy as np
import pytest

from photon_splitter.analysis.correlations import (
    DetectionChannels,
    correlation_grid,
    gamma_analytic,
    gamma_numeric,
)
from photon_splitter.exceptions import (
    InvalidPortError,
    NegativeTimeError,
    UnnormalizedStateError,
)
from photon_splitter.quantum.model import initial_state
from photon_splitter.quantum.propagator import propagator
from photon_splitter.quantum.schemas import MziParams, Port, SystemKind, SystemParams

FOCK = initial_state(SystemKind.UNENTANGLED)
PORTS = ("c", "d")


class TestGammaNumeric:
    """Tests for the numeric correlation."""

    def test_simultaneous_split_at_balanced_setting(self):
        """Test Gamma_cd(0, 0) = 2 sin^2(2 omega) at gamma = kappa."""
        value = gamma_numeric(
            SystemParams(gamma=1.0), MziParams(omega=math.pi / 4), "c", "d", FOCK, 0.0, 0.0
        )

        assert value == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("omega", [0.1, 0.303, 0.7, 1.2])
    def test_simultaneous_split_formula(self, omega):
        """Test Gamma_cd(0, 0) follows 2 sin^2(2 omega) at gamma = kappa."""
        value = gamma_numeric(SystemParams(gamma=1.0), MziParams(omega=omega), "c", "d", FOCK, 0, 0)

        assert value == pytest.approx(2 * math.sin(2 * omega) ** 2, abs=1e-12)

    @pytest.mark.parametrize("t", [0.0, 0.4, 1.5, 5.0])
    def test_no_immediate_repeat_from_atom_port(self, t):
        """Test Gamma_cc(t, 0) = 0 at omega = 0, where c only sees the atom."""
        value = gamma_numeric(SystemParams(gamma=0.92), MziParams(), Port.C, Port.C, FOCK, t, 0.0)

        assert value == pytest.approx(0.0, abs=1e-14)

    def test_ports_are_case_insensitive(self):
        """Test upper-case port names are accepted."""
        params, mzi = SystemParams(gamma=0.6), MziParams(omega=0.2)

        upper = gamma_numeric(params, mzi, "C", "D", FOCK, 0.3, 0.2)
        lower = gamma_numeric(params, mzi, "c", "d", FOCK, 0.3, 0.2)

        assert upper == lower

    def test_flux_sum_independent_of_setting(self, rng):
        """Test the sum over port pairs does not depend on omega or phi."""
        params = SystemParams(gamma=0.7)
        reference = sum(
            gamma_numeric(params, MziParams(), x, y, FOCK, 0.5, 0.8) for x in PORTS for y in PORTS
        )

        for omega, phi in zip(rng.uniform(0, math.pi, 5), rng.uniform(-3, 3, 5), strict=True):
            mzi = MziParams(omega=float(omega), phi=float(phi))
            total = sum(
                gamma_numeric(params, mzi, x, y, FOCK, 0.5, 0.8) for x in PORTS for y in PORTS
            )
            assert total == pytest.approx(reference, abs=1e-12)

    def test_entangled_scales_with_chi(self):
        """Test the cascaded correlation is linear in chi at fixed delta."""
        base = SystemParams(gamma=0.55, delta=0.3, chi=1e-3, kind=SystemKind.ENTANGLED)
        half = base.model_copy(update={"chi": 5e-4})
        psi = initial_state(SystemKind.ENTANGLED)

        full_value = gamma_numeric(base, MziParams(omega=0.283), "c", "d", psi, 1.2, 0.4)
        half_value = gamma_numeric(half, MziParams(omega=0.283), "c", "d", psi, 1.2, 0.4)

        assert full_value > 0
        assert half_value == pytest.approx(full_value / 2, rel=1e-9)

    def test_entangled_half_step_convergence(self):
        """Test splitting each interval into two half steps reproduces the correlation."""
        params = SystemParams(gamma=0.55, delta=0.3, chi=1e-3, kind=SystemKind.ENTANGLED)
        mzi = MziParams(omega=0.283)
        psi = initial_state(SystemKind.ENTANGLED)
        channels = DetectionChannels.build(params, mzi)
        half = propagator(channels.generator, 0.5)

        vector = channels.d_out @ (half @ (half @ (channels.c_out @ (half @ (half @ psi)))))
        stepped = float(np.vdot(vector, vector).real)

        assert stepped > 0
        assert gamma_numeric(params, mzi, "c", "d", psi, 1.0, 1.0) == pytest.approx(
            stepped, rel=1e-8
        )

    def test_invalid_port(self):
        """Test unknown port names are rejected."""
        with pytest.raises(InvalidPortError):
            gamma_numeric(SystemParams(gamma=1.0), MziParams(), "x", "c", FOCK, 0, 0)

    def test_unnormalized_state(self):
        """Test the initial state must be normalized."""
        with pytest.raises(UnnormalizedStateError):
            gamma_numeric(SystemParams(gamma=1.0), MziParams(), "c", "d", 2 * FOCK, 0, 0)

    def test_negative_times(self):
        """Test negative t or tau is rejected."""
        with pytest.raises(NegativeTimeError):
            gamma_numeric(SystemParams(gamma=1.0), MziParams(), "c", "d", FOCK, -1.0, 0)
        with pytest.raises(NegativeTimeError):
            gamma_numeric(SystemParams(gamma=1.0), MziParams(), "c", "d", FOCK, 0, -1.0)


class TestCorrelationGrid:
    """Tests for correlation_grid."""

    def test_matches_pointwise(self):
        """Test grid values equal single-point evaluations."""
        params, mzi = SystemParams(gamma=1.4), MziParams(omega=0.5, phi=0.3)
        times, taus = [0.0, 0.7], [0.0, 0.2, 1.1]

        points = correlation_grid(params, mzi, "d", "c", FOCK, times, taus)

        assert [(p.t, p.tau) for p in points] == [(t, tau) for t in times for tau in taus]
        for point in points:
            expected = gamma_numeric(params, mzi, "d", "c", FOCK, point.t, point.tau)
            assert point.value == pytest.approx(expected, abs=1e-14)


class TestGammaAnalytic:
    """Tests for the closed-form correlations."""

    @pytest.mark.parametrize("direction", ["cd", "dc"])
    def test_matches_numeric(self, direction):
        """Test the closed form at one setting."""
        gamma, mzi = 1.0, MziParams(omega=0.303)
        x, y = direction

        analytic = gamma_analytic(gamma, mzi, direction, 0.7, 0.3)
        numeric = gamma_numeric(SystemParams(gamma=gamma), mzi, x, y, FOCK, 0.7, 0.3)

        assert analytic == pytest.approx(numeric, abs=1e-10)

    def test_matches_numeric_on_grid(self, rng):
        """Test the closed form over sampled settings on a 10 x 10 time grid."""
        grid = np.linspace(0.0, 5.0, 10)
        for _ in range(20):
            gamma = float(rng.uniform(0.05, 3.0))
            mzi = MziParams(omega=float(rng.uniform(0, math.pi)), phi=float(rng.uniform(-3, 3)))
            for direction in ("cd", "dc"):
                x, y = direction
                points = correlation_grid(SystemParams(gamma=gamma), mzi, x, y, FOCK, grid, grid)
                for point in points:
                    analytic = gamma_analytic(gamma, mzi, direction, point.t, point.tau)
                    assert abs(analytic - point.value) <= 1e-9

    def test_exceptional_point(self):
        """Test the closed form stays accurate at 2 gamma = kappa."""
        mzi = MziParams(omega=0.9, phi=0.4)

        analytic = gamma_analytic(0.5, mzi, "cd", 1.1, 0.6)
        numeric = gamma_numeric(SystemParams(gamma=0.5), mzi, "c", "d", FOCK, 1.1, 0.6)

        assert analytic == pytest.approx(numeric, abs=1e-10)

    @pytest.mark.parametrize("omega", [0.2, math.pi / 4, 1.0])
    def test_origin_value(self, omega):
        """Test Gamma_cd(0, 0) = 2 sin^2(2 omega) at gamma = kappa."""
        value = gamma_analytic(1.0, MziParams(omega=omega), "cd", 0.0, 0.0)

        assert value == pytest.approx(2 * math.sin(2 * omega) ** 2, abs=1e-12)

    def test_invalid_direction(self):
        """Test only cd and dc are accepted."""
        with pytest.raises(InvalidPortError):
            gamma_analytic(1.0, MziParams(), "cc", 0.0, 0.0)

    def test_negative_time(self):
        """Test negative tau is rejected."""
        with pytest.raises(NegativeTimeError):
            gamma_analytic(1.0, MziParams(), "cd", 0.0, -0.5)


class TestDetectionChannels:
    """Tests for DetectionChannels."""

    def test_jump_selects_port(self):
        """Test jump returns the port's detection operator."""
        channels = DetectionChannels.build(SystemParams(gamma=0.8), MziParams(omega=0.3))

        assert channels.jump("c") is channels.c_out
        assert channels.jump(Port.D) is channels.d_out
