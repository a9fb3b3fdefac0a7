"""Tests for the config module."""

from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from photon_splitter.config import (
    OutputFormat,
    QuadratureSettings,
    RangeSpec,
    RunConfig,
    Settings,
    get_settings,
    reload_settings,
)
from photon_splitter.exceptions import InvalidRangeError, InvalidToleranceError


class TestSettings:
    """Tests for the Settings class."""

    def test_default_settings(self, clean_env):
        """Test default settings values."""
        settings = Settings()

        assert settings.quad_rtol == 1e-7
        assert settings.quad_atol == 1e-13
        assert settings.quad_limit == 2000
        assert settings.tail_factor == 20
        assert settings.chi == 1e-3
        assert settings.delta_floor == 1e-9
        assert settings.sweep_resolution == 200
        assert settings.optimize_resolution == 40
        assert settings.refine_tol == 1e-10
        assert settings.refine_max_iter == 20000
        assert settings.workers == 4

    def test_quadrature_override_from_env(self, monkeypatch):
        """Test quadrature tolerances from environment."""
        monkeypatch.setenv("SPLITTER_QUAD_RTOL", "1e-9")
        monkeypatch.setenv("SPLITTER_QUAD_LIMIT", "500")

        settings = Settings()

        assert settings.quad_rtol == 1e-9
        assert settings.quad_limit == 500

    def test_workers_override_from_env(self, monkeypatch):
        """Test the worker count comes from the environment and must be positive."""
        monkeypatch.setenv("SPLITTER_WORKERS", "2")
        assert Settings().workers == 2

        monkeypatch.setenv("SPLITTER_WORKERS", "0")
        with pytest.raises(ValidationError):
            Settings()

    def test_output_dir_default(self, clean_env):
        """Test default output directory."""
        settings = Settings()

        assert settings.output_dir == Path("splitter-output")

    def test_output_dir_override(self, monkeypatch):
        """Test output directory override from environment."""
        monkeypatch.setenv("SPLITTER_OUTPUT_DIR", "/custom/path")

        settings = Settings()

        assert settings.output_dir == Path("/custom/path")

    def test_ensure_dirs(self, output_dir):
        """Test ensure_dirs creates the output directory."""
        settings = get_settings()
        assert not output_dir.exists()

        settings.ensure_dirs()

        assert output_dir.is_dir()


class TestGetSettings:
    """Tests for get_settings and reload_settings."""

    def test_get_settings_cached(self):
        """Test that get_settings returns the same instance."""
        assert get_settings() is get_settings()

    def test_reload_settings(self, monkeypatch):
        """Test that reload_settings picks up new environment values."""
        monkeypatch.setenv("SPLITTER_CHI", "0.01")
        first = reload_settings()

        monkeypatch.setenv("SPLITTER_CHI", "0.02")
        second = reload_settings()

        assert first is not second
        assert first.chi == 0.01
        assert second.chi == 0.02
        monkeypatch.delenv("SPLITTER_CHI")
        reload_settings()


class TestQuadratureSettings:
    """Tests for quadrature controls."""

    def test_defaults(self):
        """Test the default quadrature settings."""
        quad = QuadratureSettings()

        assert quad.rtol == 1e-7
        assert quad.method == "quadrature"

    def test_from_settings_uses_environment(self, monkeypatch):
        """Test values are taken from the environment settings."""
        monkeypatch.setenv("SPLITTER_QUAD_RTOL", "1e-8")
        monkeypatch.setenv("SPLITTER_TAIL_FACTOR", "30")
        reload_settings()

        quad = QuadratureSettings.from_settings()

        assert quad.rtol == 1e-8
        assert quad.tail_factor == 30
        monkeypatch.delenv("SPLITTER_QUAD_RTOL")
        monkeypatch.delenv("SPLITTER_TAIL_FACTOR")
        reload_settings()

    def test_from_settings_overrides(self, clean_env):
        """Test explicit overrides win and None overrides are ignored."""
        quad = QuadratureSettings.from_settings(rtol=1e-11, atol=None, method="lyapunov")

        assert quad.rtol == 1e-11
        assert quad.atol == 1e-13
        assert quad.method == "lyapunov"

    @pytest.mark.parametrize("rtol", [0.0, -1e-8])
    def test_non_positive_rtol_rejected(self, rtol):
        """Test rtol must be strictly positive."""
        with pytest.raises(InvalidToleranceError) as exc_info:
            QuadratureSettings(rtol=rtol)

        assert exc_info.value.name == "rtol"

    def test_negative_atol_rejected(self):
        """Test atol may be zero but not negative."""
        assert QuadratureSettings(atol=0.0).atol == 0.0
        with pytest.raises(InvalidToleranceError):
            QuadratureSettings(atol=-1.0)

    def test_zero_tail_factor_rejected(self):
        """Test the truncation factor must be positive."""
        with pytest.raises(InvalidToleranceError):
            QuadratureSettings(tail_factor=0.0)


class TestRangeSpec:
    """Tests for command-line parameter ranges."""

    def test_interval_left_closed(self):
        """Test a:b:n includes a and excludes b by default."""
        spec = RangeSpec.parse("0:1:4")

        assert spec.is_interval
        assert np.allclose(spec.points(), [0.0, 0.25, 0.5, 0.75])

    def test_interval_right_closed(self):
        """Test closed='right' excludes a and includes b."""
        spec = RangeSpec.parse("0:3:3")

        assert np.allclose(spec.points(closed="right"), [1.0, 2.0, 3.0])

    def test_single_value(self):
        """Test a single value parses to one point."""
        spec = RangeSpec.parse("0.303")

        assert not spec.is_interval
        assert spec.points().tolist() == [0.303]

    def test_value_list(self):
        """Test comma separated values keep their order."""
        spec = RangeSpec.parse("0, 0.283,0.5")

        assert spec.points().tolist() == [0.0, 0.283, 0.5]

    @pytest.mark.parametrize(
        "text",
        ["", "1:0:5", "0:1:0", "0:1", "a:b:c", "0:1:2:3", "x", "nan", "1,inf"],
    )
    def test_invalid_ranges(self, text):
        """Test malformed and empty ranges are rejected."""
        with pytest.raises(InvalidRangeError):
            RangeSpec.parse(text)


class TestRunConfig:
    """Tests for the echoed run configuration."""

    def test_echo_is_json_serializable(self):
        """Test echo renders enums as plain values."""
        config = RunConfig(command="sweep", gamma="0:3:10", format=OutputFormat.JSON)

        echoed = config.echo()

        assert echoed["command"] == "sweep"
        assert echoed["format"] == "json"
        assert echoed["gamma"] == "0:3:10"
        assert echoed["spot_checks"] == 0
