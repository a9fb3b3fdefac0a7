"""Photon Splitter CLI using Typer."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Annotated, NoReturn

import click
import numpy as np
import typer
from rich.console import Console
from rich.logging import RichHandler

from .analysis.efficiency import analytic_efficiency, splitting_efficiency_numeric
from .analysis.optimizer import Axis, analytic_objective, default_axes, optimize_efficiency
from .analysis.verification import run_verification
from .config import OutputFormat, QuadratureSettings, RangeSpec, RunConfig, get_settings
from .exceptions import (
    ConfigurationError,
    InvalidParameterError,
    InvalidRangeError,
    InvalidToleranceError,
    ModelError,
    SplitterError,
)
from .optics.singlemode import TwoPhotonState, s_max, split_probability
from .output.formatter import OutputFormatter
from .output.writer import SINGLEMODE_COLUMNS, SWEEP_COLUMNS, ResultWriter, Row
from .quantum.schemas import (
    CollapseConvention,
    EfficiencyResult,
    MziParams,
    Provenance,
    SystemKind,
    SystemParams,
)

app = typer.Typer(
    name="splitter",
    help="Simulate and optimize two-photon splitting by a 1D atom and a Mach-Zehnder unitary.",
    no_args_is_help=True,
)

console = Console()
formatter = OutputFormatter()
logger = logging.getLogger(__name__)

# phi grid used by optimize; odd so that phi = 0 is on it
PHI_GRID_POINTS = 9
SPOT_CHECK_TOLERANCE = {SystemKind.UNENTANGLED: 1e-6, SystemKind.ENTANGLED: 5e-3}

KindOption = Annotated[
    SystemKind, typer.Option("--kind", "-k", help="Photon-pair source: unentangled or entangled")
]
DeltaOption = Annotated[
    float, typer.Option("--delta", help="Source-atom half-decay rate in units of kappa")
]
ChiOption = Annotated[
    float | None, typer.Option("--chi", help="Left-mirror bandwidth for the numeric entangled path")
]
OutOption = Annotated[Path | None, typer.Option("--out", "-o", help="Output file path")]
FormatOption = Annotated[OutputFormat, typer.Option("--format", "-f", help="Output file format")]


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log progress")] = False,
    debug: Annotated[bool, typer.Option("--debug", help="Log numerical details")] = False,
) -> None:
    """Two-photon splitting simulator."""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)],
        force=True,
    )


def fail(error: SplitterError) -> NoReturn:
    """Print an error and exit: 2 for invalid configuration, 1 otherwise."""
    formatter.print_error(error.message)
    code = 2 if isinstance(error, ConfigurationError | ModelError) else 1
    raise typer.Exit(code) from None


def resolve_output(out: Path | None, command: str, kind: SystemKind, fmt: OutputFormat) -> Path:
    if out is not None:
        return out
    settings = get_settings()
    settings.ensure_dirs()
    return settings.output_dir / f"{command}-{kind.value}.{fmt.value}"


def gamma_points(text: str) -> np.ndarray:
    points = RangeSpec.parse(text).points(closed="right")
    if points.size == 0 or not np.all(points > 0):
        raise InvalidRangeError(text, "gamma/kappa must be > 0")
    return points


def omega_points(text: str) -> np.ndarray:
    return RangeSpec.parse(text).points(closed="left")


def analytic_block(
    kind: SystemKind, gamma: float, omegas: np.ndarray, phi: float, delta: float
) -> list[Row]:
    params = SystemParams(gamma=gamma, delta=delta, kind=kind)
    return [
        {
            "gamma_over_kappa": gamma,
            "omega": float(omega),
            "phi": phi,
            "delta": delta,
            "S": analytic_efficiency(params, MziParams(omega=float(omega), phi=phi)),
            "provenance": Provenance.ANALYTIC.value,
        }
        for omega in omegas
    ]


def analytic_rows(
    kind: SystemKind, gammas: np.ndarray, omegas: np.ndarray, phi: float, delta: float
) -> list[Row]:
    """Closed-form S over the (gamma, omega) grid, gamma outermost.

    One gamma block per task; map keeps the blocks in grid order.
    """
    rows: list[Row] = []
    with (
        formatter.create_progress() as progress,
        ThreadPoolExecutor(max_workers=get_settings().workers) as executor,
    ):
        task = progress.add_task("Evaluating S", total=gammas.size * omegas.size)
        blocks = executor.map(
            lambda gamma: analytic_block(kind, float(gamma), omegas, phi, delta), gammas
        )
        for block in blocks:
            rows.extend(block)
            progress.advance(task, len(block))
    return rows


def spot_check_rows(
    rows: list[Row], count: int, kind: SystemKind, chi: float, quad: QuadratureSettings
) -> tuple[list[Row], float]:
    """Recompute evenly spaced rows numerically; return them and the worst deviation."""
    settings = get_settings()
    picks = sorted({int(i) for i in np.linspace(0, len(rows) - 1, count).round()})

    def recompute(row: Row) -> EfficiencyResult:
        delta = 0.0
        if kind is SystemKind.ENTANGLED:
            delta = max(float(row["delta"]), settings.delta_floor)
        params = SystemParams(gamma=float(row["gamma_over_kappa"]), delta=delta, chi=chi, kind=kind)
        mzi = MziParams(omega=float(row["omega"]), phi=float(row["phi"]))
        return splitting_efficiency_numeric(params, mzi, quad)

    selected = [rows[index] for index in picks]
    with ThreadPoolExecutor(max_workers=settings.workers) as executor:
        results = list(executor.map(recompute, selected))

    checked: list[Row] = []
    worst = 0.0
    for row, result in zip(selected, results, strict=True):
        if logger.isEnabledFor(logging.INFO):
            formatter.print_efficiency(result)
        worst = max(worst, abs(result.s - float(row["S"])))
        checked.append({**row, "S": result.s, "provenance": Provenance.NUMERIC.value})
    return checked, worst


def best_row(rows: list[Row]) -> Row:
    analytic = [row for row in rows if row["provenance"] == Provenance.ANALYTIC.value]
    return max(analytic or rows, key=lambda row: float(row["S"]))


def effective_phi(kind: SystemKind, phi: float) -> float:
    if kind is SystemKind.ENTANGLED and phi != 0:
        formatter.print_warning("The entangled closed form has no phi dependence; using phi=0")
        return 0.0
    return phi


@app.command()
def sweep(
    kind: KindOption = SystemKind.UNENTANGLED,
    gamma: Annotated[
        str | None, typer.Option("--gamma", "-g", help="gamma/kappa range a:b:n, excludes a")
    ] = None,
    omega: Annotated[
        str | None, typer.Option("--omega", "-w", help="omega range a:b:n, excludes b")
    ] = None,
    phi: Annotated[float, typer.Option("--phi", help="Interferometer input phase")] = 0.0,
    delta: DeltaOption = 0.0,
    chi: ChiOption = None,
    spot_checks: Annotated[
        int, typer.Option("--spot-checks", help="Rows to recompute with the numeric pipeline")
    ] = 0,
    tol: Annotated[
        float | None, typer.Option("--tol", help="Relative quadrature tolerance for spot checks")
    ] = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
) -> None:
    """Tabulate the closed-form splitting efficiency over a (gamma, omega) grid."""
    try:
        settings = get_settings()
        resolution = settings.sweep_resolution
        gamma = gamma or f"0:3:{resolution}"
        omega = omega or f"0:{math.pi / 2!r}:{resolution}"
        phi = effective_phi(kind, phi)
        chi = settings.chi if chi is None else chi
        quad = QuadratureSettings.from_settings(rtol=tol)
        if spot_checks < 0:
            raise InvalidParameterError("spot-checks", spot_checks, "must be >= 0")
        SystemParams(gamma=1.0, delta=delta, chi=chi, kind=kind)

        path = resolve_output(out, "sweep", kind, fmt)
        config = RunConfig(
            command="sweep",
            kind=kind.value,
            gamma=gamma,
            omega=omega,
            phi=phi,
            delta=delta,
            chi=chi,
            tol=quad.rtol,
            spot_checks=spot_checks,
            out=str(path),
            format=fmt,
        )
        rows = analytic_rows(kind, gamma_points(gamma), omega_points(omega), phi, delta)

        deviation = None
        if spot_checks:
            checked, deviation = spot_check_rows(rows, spot_checks, kind, chi, quad)
            rows = rows + checked

        ResultWriter(config).write(path, SWEEP_COLUMNS, rows)
        formatter.print_sweep_summary(path, len(rows), best_row(rows), deviation)

        if deviation is not None and deviation > SPOT_CHECK_TOLERANCE[kind]:
            formatter.print_error(
                f"Numeric spot checks deviate from the closed form by {deviation:.2e}"
            )
            raise typer.Exit(1)

    except SplitterError as e:
        fail(e)
    except click.exceptions.Exit:
        # Re-raise typer.Exit (which is click.exceptions.Exit) without catching it
        raise
    except Exception as e:
        formatter.print_error(f"Unexpected error: {e}")
        raise typer.Exit(1) from None


@app.command("slice")
def slice_(
    kind: KindOption = SystemKind.UNENTANGLED,
    gamma: Annotated[
        str | None, typer.Option("--gamma", "-g", help="gamma/kappa range a:b:n, excludes a")
    ] = None,
    omega: Annotated[
        str | None, typer.Option("--omega", "-w", help="Comma-separated omega values")
    ] = None,
    phi: Annotated[float, typer.Option("--phi", help="Interferometer input phase")] = 0.0,
    delta: DeltaOption = 0.0,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
) -> None:
    """Efficiency curves in gamma/kappa at fixed omega values."""
    try:
        settings = get_settings()
        gamma = gamma or f"0:3:{settings.sweep_resolution}"
        omega = omega or ("0,0.303" if kind is SystemKind.UNENTANGLED else "0,0.283")
        phi = effective_phi(kind, phi)
        SystemParams(gamma=1.0, delta=delta, kind=kind)

        path = resolve_output(out, "slice", kind, fmt)
        config = RunConfig(
            command="slice",
            kind=kind.value,
            gamma=gamma,
            omega=omega,
            phi=phi,
            delta=delta,
            out=str(path),
            format=fmt,
        )
        omegas = omega_points(omega)
        rows = analytic_rows(kind, gamma_points(gamma), omegas, phi, delta)
        ResultWriter(config).write(path, SWEEP_COLUMNS, rows)

        formatter.print_header("Peak per curve")
        for w in omegas:
            curve = [row for row in rows if row["omega"] == float(w)]
            peak = best_row(curve)
            console.print(
                f"  omega={float(w):.4f}: S={formatter.format_efficiency(float(peak['S']))} "
                f"at gamma/kappa={float(peak['gamma_over_kappa']):.4f}"
            )
        formatter.print_success(f"Wrote {path}")

    except SplitterError as e:
        fail(e)
    except click.exceptions.Exit:
        raise
    except Exception as e:
        formatter.print_error(f"Unexpected error: {e}")
        raise typer.Exit(1) from None


@app.command()
def optimize(
    kind: KindOption = SystemKind.UNENTANGLED,
    omega: Annotated[
        float | None, typer.Option("--omega", "-w", help="Pin omega instead of searching it")
    ] = None,
    phi: Annotated[
        float | None, typer.Option("--phi", help="Pin phi instead of searching it")
    ] = None,
    delta: DeltaOption = 0.0,
    resolution: Annotated[
        int | None, typer.Option("--resolution", "-r", help="Grid points per axis")
    ] = None,
    tol: Annotated[
        float | None, typer.Option("--tol", help="Simplex convergence tolerance")
    ] = None,
    out: Annotated[Path | None, typer.Option("--out", "-o", help="Write the optimum row")] = None,
    fmt: FormatOption = OutputFormat.CSV,
) -> None:
    """Find the splitting-efficiency maximum of the closed form."""
    try:
        settings = get_settings()
        resolution = resolution or settings.optimize_resolution
        tol = settings.refine_tol if tol is None else tol
        if not tol > 0:
            raise InvalidToleranceError("tol", tol)
        SystemParams(gamma=1.0, delta=delta, kind=kind)

        axes = default_axes(kind)
        if omega is not None:
            axes[1] = Axis.fixed("omega", omega)
        if kind is SystemKind.UNENTANGLED and phi is not None:
            axes[2] = Axis.fixed("phi", phi)
        resolutions = [resolution, resolution, PHI_GRID_POINTS][: len(axes)]

        formatter.print_header(f"Optimizing {kind.value} splitting efficiency")
        report = optimize_efficiency(
            analytic_objective(kind, delta), axes, resolutions, tol=tol
        )
        formatter.print_optimum(report)

        if out is not None:
            best = report.optimum.as_dict()
            config = RunConfig(
                command="optimize",
                kind=kind.value,
                phi=best.get("phi", 0.0),
                delta=delta,
                tol=tol,
                resolution=resolution,
                out=str(out),
                format=fmt,
            )
            row: Row = {
                "gamma_over_kappa": best["gamma"],
                "omega": best["omega"],
                "phi": best.get("phi", 0.0),
                "delta": delta,
                "S": report.optimum.value,
                "provenance": Provenance.ANALYTIC.value,
            }
            ResultWriter(config).write(out, SWEEP_COLUMNS, [row])
            formatter.print_success(f"Wrote {out}")

    except SplitterError as e:
        fail(e)
    except click.exceptions.Exit:
        raise
    except Exception as e:
        formatter.print_error(f"Unexpected error: {e}")
        raise typer.Exit(1) from None


@app.command()
def verify(
    tol: Annotated[
        float, typer.Option("--tol", help="Relative quadrature tolerance for numeric checks")
    ] = 1e-10,
    collapse: Annotated[
        CollapseConvention,
        typer.Option("--collapse", help="Collapse-operator convention to check"),
    ] = CollapseConvention.CORRECTED,
    chi: ChiOption = None,
    seed: Annotated[int, typer.Option("--seed", help="Seed for sampled parameters")] = 0,
) -> None:
    """Run the analytic-vs-numeric invariant suite."""
    try:
        quad = QuadratureSettings.from_settings(rtol=tol)
        chi = get_settings().chi if chi is None else chi
        if not chi > 0:
            raise InvalidParameterError("chi", chi, "must be > 0")

        formatter.print_header("Running invariant checks")
        report = run_verification(quad, collapse=collapse, chi=chi, seed=seed)
        formatter.print_verification(report)
        if not report.passed:
            raise typer.Exit(1)

    except SplitterError as e:
        fail(e)
    except click.exceptions.Exit:
        raise
    except Exception as e:
        formatter.print_error(f"Unexpected error: {e}")
        raise typer.Exit(1) from None


@app.command()
def singlemode(
    weight: Annotated[
        float, typer.Option("--weight", help="|d|^2, the |11> weight of d|11> + g|->")
    ] = 0.5,
    relative_phase: Annotated[
        float, typer.Option("--relative-phase", help="Phase of d relative to g")
    ] = 0.0,
    omega: Annotated[
        str | None, typer.Option("--omega", "-w", help="omega range a:b:n, excludes b")
    ] = None,
    phi: Annotated[float, typer.Option("--phi", help="Interferometer input phase")] = 0.0,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
) -> None:
    """Tabulate the single-mode split probability and its S_max bound."""
    try:
        if not 0 <= weight <= 1:
            raise InvalidParameterError("weight", weight, "must lie in [0, 1]")
        omega = omega or f"0:{math.pi / 2!r}:{get_settings().sweep_resolution}"
        d = math.sqrt(weight) * complex(math.cos(relative_phase), math.sin(relative_phase))
        g = complex(math.sqrt(1 - weight))
        state = TwoPhotonState.from_split_form(d, g)

        path = resolve_output(out, "singlemode", SystemKind.UNENTANGLED, fmt)
        config = RunConfig(command="singlemode", omega=omega, phi=phi, out=str(path), format=fmt)
        rows: list[Row] = [
            {
                "omega": float(w),
                "phi": phi,
                "split_probability": split_probability(state, MziParams(omega=float(w), phi=phi)),
            }
            for w in omega_points(omega)
        ]
        ResultWriter(config).write(path, SINGLEMODE_COLUMNS, rows)

        best = max(rows, key=lambda row: float(row["split_probability"]))
        formatter.print_singlemode(
            s_max(d, g), float(best["omega"]), float(best["split_probability"])
        )
        formatter.print_success(f"Wrote {path}")

    except SplitterError as e:
        fail(e)
    except click.exceptions.Exit:
        raise
    except Exception as e:
        formatter.print_error(f"Unexpected error: {e}")
        raise typer.Exit(1) from None


@app.command()
def config() -> None:
    """Show the active configuration."""
    console.print()
    console.print("[bold]Photon Splitter Configuration[/bold]")
    console.print()
    formatter.print_settings(get_settings())


@app.command()
def version() -> None:
    """Show version information."""
    from . import __version__

    console.print(f"Photon Splitter v{__version__}")


if __name__ == "__main__":
    app()
