"""Integration tests for the CLI module."""

import json

from typer.testing import CliRunner

from photon_splitter.cli import app
from photon_splitter.config import reload_settings

runner = CliRunner()


def data_lines(path):
    """CSV lines after the config comment and header."""
    return path.read_text().splitlines()[2:]


class TestCliVersion:
    """Tests for version command."""

    def test_version_command(self):
        """Test version command output."""
        result = runner.invoke(app, ["version"])

        assert result.exit_code == 0
        assert "Photon Splitter" in result.stdout
        assert "0.1.0" in result.stdout


class TestCliConfig:
    """Tests for config command."""

    def test_config_command(self, output_dir):
        """Test config command shows settings."""
        result = runner.invoke(app, ["config"])

        assert result.exit_code == 0
        assert "Configuration" in result.stdout
        assert "quad_rtol" in result.stdout
        assert "sweep_resolution" in result.stdout


class TestCliSweep:
    """Tests for sweep command."""

    def test_sweep_single_point(self, tmp_path):
        """Test a one-point sweep reproduces the optimum value."""
        out = tmp_path / "sweep.csv"

        result = runner.invoke(
            app, ["sweep", "--gamma", "0.92", "--omega", "0.303", "--out", str(out)]
        )

        assert result.exit_code == 0
        rows = data_lines(out)
        assert len(rows) == 1
        gamma, omega, phi, delta, s, provenance = rows[0].split(",")
        assert (gamma, omega, provenance) == ("0.92", "0.303", "analytic")
        assert abs(float(s) - 0.750039) < 1e-5

    def test_sweep_default_output(self, small_grids):
        """Test the default grid and output path."""
        result = runner.invoke(app, ["sweep"])

        assert result.exit_code == 0
        path = small_grids / "sweep-unentangled.csv"
        assert path.exists()
        assert len(data_lines(path)) == 12 * 12

    def test_sweep_full_grid_maximum(self, output_dir):
        """Test the 200 x 200 sweep peaks at the Fock-source optimum."""
        result = runner.invoke(app, ["sweep"])

        assert result.exit_code == 0
        rows = data_lines(output_dir / "sweep-unentangled.csv")
        assert len(rows) == 200 * 200
        best = max(float(row.split(",")[4]) for row in rows)
        assert abs(best - 0.750039) < 2e-3

    def test_sweep_grid_json(self, tmp_path):
        """Test a JSON sweep has gamma outermost and excludes gamma = 0."""
        out = tmp_path / "sweep.json"

        result = runner.invoke(
            app,
            ["sweep", "-g", "0:3:3", "-w", "0:1.5:2", "--format", "json", "-o", str(out)],
        )

        assert result.exit_code == 0
        document = json.loads(out.read_text())
        assert document["config"]["gamma"] == "0:3:3"
        assert [row["gamma_over_kappa"] for row in document["rows"]] == [1, 1, 2, 2, 3, 3]
        assert [row["omega"] for row in document["rows"]][:2] == [0, 0.75]

    def test_sweep_spot_checks(self, tmp_path):
        """Test numeric spot checks are appended and agree with the closed form."""
        out = tmp_path / "sweep.csv"

        result = runner.invoke(
            app,
            [
                "sweep", "-g", "0:2:2", "-w", "0:1:2",
                "--spot-checks", "2", "--tol", "1e-10", "-o", str(out),
            ],
        )

        assert result.exit_code == 0
        rows = data_lines(out)
        assert len(rows) == 6
        assert sum(row.endswith(",numeric") for row in rows) == 2

    def test_sweep_verbose_prints_spot_checks(self, tmp_path):
        """Test --verbose prints each numeric spot check."""
        out = tmp_path / "sweep.csv"

        result = runner.invoke(
            app, ["-v", "sweep", "-g", "1", "-w", "0", "--spot-checks", "1", "-o", str(out)]
        )

        assert result.exit_code == 0
        assert "Evaluations" in result.stdout
        assert "P(c,d)" in result.stdout

    def test_sweep_independent_of_worker_count(self, tmp_path, monkeypatch):
        """Test concurrent evaluation keeps rows in grid order."""
        contents = []
        for workers in ("1", "4"):
            monkeypatch.setenv("SPLITTER_WORKERS", workers)
            reload_settings()
            out = tmp_path / f"sweep-{workers}.csv"

            result = runner.invoke(
                app,
                ["sweep", "-g", "0:3:7", "-w", "0:1.5:5", "--spot-checks", "3", "-o", str(out)],
            )

            assert result.exit_code == 0
            contents.append(out.read_text())
        monkeypatch.delenv("SPLITTER_WORKERS")
        reload_settings()

        assert contents[0] == contents[1]
        assert len(data_lines(tmp_path / "sweep-4.csv")) == 7 * 5 + 3

    def test_sweep_entangled(self, tmp_path):
        """Test the cascaded source sweep records delta."""
        out = tmp_path / "sweep.csv"

        result = runner.invoke(
            app,
            [
                "sweep", "-k", "entangled", "-g", "0.55", "-w", "0.283",
                "--delta", "0.1", "-o", str(out),
            ],
        )

        assert result.exit_code == 0
        assert data_lines(out)[0].startswith("0.55,0.283,0,0.1,")

    def test_sweep_invalid_range(self, tmp_path):
        """Test malformed ranges exit with code 2."""
        result = runner.invoke(app, ["sweep", "--gamma", "3:1:5", "-o", str(tmp_path / "x.csv")])

        assert result.exit_code == 2
        assert "Invalid range" in result.stdout

    def test_sweep_nonpositive_gamma(self, tmp_path):
        """Test gamma values must be positive."""
        result = runner.invoke(app, ["sweep", "--gamma", "0,1", "-o", str(tmp_path / "x.csv")])

        assert result.exit_code == 2

    def test_sweep_unwritable(self, tmp_path):
        """Test an unwritable output path exits with code 1."""
        blocker = tmp_path / "file"
        blocker.write_text("x")

        result = runner.invoke(
            app, ["sweep", "-g", "1", "-w", "0", "-o", str(blocker / "out.csv")]
        )

        assert result.exit_code == 1
        assert "Error" in result.stdout


class TestCliSlice:
    """Tests for slice command."""

    def test_slice_default_curves(self, small_grids):
        """Test the default curves at omega = 0 and the optimum."""
        result = runner.invoke(app, ["slice"])

        assert result.exit_code == 0
        assert "Peak per curve" in result.stdout
        path = small_grids / "slice-unentangled.csv"
        assert len(data_lines(path)) == 2 * 12

    def test_slice_entangled(self, tmp_path):
        """Test the cascaded curves are written."""
        out = tmp_path / "slice.csv"

        result = runner.invoke(
            app, ["slice", "-k", "entangled", "-g", "0:3:30", "-w", "0,0.283", "-o", str(out)]
        )

        assert result.exit_code == 0
        assert len(data_lines(out)) == 60


class TestCliOptimize:
    """Tests for optimize command."""

    def test_optimize_unentangled(self, small_grids, tmp_path):
        """Test the Fock-source optimum is reported at phi = 0, not its mirror."""
        out = tmp_path / "best.csv"

        result = runner.invoke(app, ["optimize", "-o", str(out)])

        assert result.exit_code == 0
        assert "0.7500" in result.stdout
        assert "gamma" in result.stdout
        gamma, omega, phi, _, s, _ = data_lines(out)[0].split(",")
        assert abs(float(gamma) - 0.92) < 0.01
        assert abs(float(omega) - 0.303) < 0.002
        assert abs(float(phi)) < 1e-4
        assert abs(float(s) - 0.750039) < 1e-5

    def test_optimize_pinned_writes_row(self, small_grids, tmp_path):
        """Test pinning omega and phi searches gamma only."""
        out = tmp_path / "best.csv"

        result = runner.invoke(app, ["optimize", "--omega", "0", "--phi", "0", "-o", str(out)])

        assert result.exit_code == 0
        gamma, omega, _, _, s, _ = data_lines(out)[0].split(",")
        assert abs(float(gamma) - 0.697) < 5e-3
        assert float(omega) == 0
        assert abs(float(s) - 0.6408) < 5e-4

    def test_optimize_entangled(self, small_grids):
        """Test the cascaded-source optimum is reported."""
        result = runner.invoke(app, ["optimize", "--kind", "entangled"])

        assert result.exit_code == 0
        assert "0.90" in result.stdout

    def test_optimize_bad_tolerance(self):
        """Test a non-positive tolerance exits with code 2."""
        result = runner.invoke(app, ["optimize", "--tol", "0"])

        assert result.exit_code == 2


class TestCliVerify:
    """Tests for verify command."""

    def test_verify_passes(self):
        """Test the invariant suite passes with the corrected operators."""
        result = runner.invoke(app, ["verify"])

        assert result.exit_code == 0
        assert "checks passed" in result.stdout

    def test_verify_printed_convention_fails(self):
        """Test the printed collapse operators fail the completeness check."""
        result = runner.invoke(app, ["verify", "--collapse", "printed"])

        assert result.exit_code == 1
        assert "completeness" in result.stdout

    def test_verify_zero_tolerance(self):
        """Test a zero tolerance is a configuration error."""
        result = runner.invoke(app, ["verify", "--tol", "0"])

        assert result.exit_code == 2
        assert "Tolerance" in result.stdout


class TestCliSinglemode:
    """Tests for singlemode command."""

    def test_singlemode_table(self, tmp_path):
        """Test the split-probability table and S_max for real amplitudes."""
        out = tmp_path / "single.csv"

        result = runner.invoke(
            app, ["singlemode", "--weight", "0.5", "-w", "0:1.5707963267948966:8", "-o", str(out)]
        )

        assert result.exit_code == 0
        assert "S_max" in result.stdout
        rows = data_lines(out)
        assert len(rows) == 8
        probabilities = [float(row.split(",")[2]) for row in rows]
        assert abs(max(probabilities) - 1.0) < 1e-12

    def test_singlemode_bad_weight(self, tmp_path):
        """Test weights outside [0, 1] exit with code 2."""
        result = runner.invoke(
            app, ["singlemode", "--weight", "1.5", "-o", str(tmp_path / "x.csv")]
        )

        assert result.exit_code == 2
