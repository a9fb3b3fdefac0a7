"""Rich terminal output formatting."""

from pathlib import Path
from typing import TYPE_CHECKING

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table

from ..quantum.schemas import EfficiencyResult

if TYPE_CHECKING:
    from ..analysis.optimizer import SearchReport
    from ..analysis.verification import VerificationReport
    from ..config import Settings


class OutputFormatter:
    """Format output using Rich for terminal display."""

    def __init__(self) -> None:
        self.console = Console()

    def print_header(self, text: str) -> None:
        """Print a section header."""
        self.console.print()
        self.console.print(f"[bold cyan]{text}[/bold cyan]")

    def get_efficiency_style(self, s: float) -> str:
        """Color for an efficiency: red at or below the 50% linear-optics bound."""
        if s <= 0.5:
            return "red"
        elif s < 0.7:
            return "yellow"
        else:
            return "green"

    def format_efficiency(self, s: float) -> str:
        style = self.get_efficiency_style(s)
        return f"[{style}]{s:.6f}[/{style}] [dim]({s * 100:.2f}%)[/dim]"

    def print_efficiency(self, result: EfficiencyResult) -> None:
        """Print a numeric efficiency with its port probabilities."""
        table = Table(show_header=False, box=None, padding=(0, 2))
        table.add_column("Metric", style="dim")
        table.add_column("Value", style="bold")

        table.add_row("S", self.format_efficiency(result.s))
        table.add_row("P(c,d)", f"{result.p_cd:.9f}")
        table.add_row("P(d,c)", f"{result.p_dc:.9f}")
        table.add_row("P(c,c)", f"{result.p_cc:.9f}")
        table.add_row("P(d,d)", f"{result.p_dd:.9f}")
        if result.params.is_entangled:
            table.add_row("Detected before post-selection", f"{result.detected:.6e}")
        table.add_row("Error estimate", f"{result.error:.2e}")
        table.add_row("Evaluations", str(result.evaluations))
        self.console.print(table)

    def print_sweep_summary(
        self,
        path: Path,
        rows: int,
        best: dict[str, float | str],
        spot_deviation: float | None = None,
    ) -> None:
        """Print where a sweep went and its best row."""
        self.console.print()
        self.console.rule("[bold blue]SWEEP[/bold blue]", style="blue")

        table = Table(show_header=False, box=None, padding=(0, 2))
        table.add_column("Metric", style="dim")
        table.add_column("Value", style="bold")
        table.add_row("Rows", str(rows))
        table.add_row("Best S", self.format_efficiency(float(best["S"])))
        table.add_row(
            "At",
            f"gamma/kappa={float(best['gamma_over_kappa']):.4f}, "
            f"omega={float(best['omega']):.4f}, phi={float(best['phi']):.4f}",
        )
        if spot_deviation is not None:
            style = "green" if spot_deviation <= 1e-6 else "red"
            table.add_row(
                "Max analytic/numeric deviation", f"[{style}]{spot_deviation:.2e}[/{style}]"
            )
        self.console.print(table)
        self.print_success(f"Wrote {path}")

    def print_optimum(self, report: "SearchReport") -> None:
        """Print the refined optimum in a panel."""
        optimum = report.optimum
        scan = report.scan
        coords = "\n".join(f"  {name:6} = {value:.6f}" for name, value in optimum.as_dict().items())
        if optimum.converged:
            status = "[green]converged[/green]"
        else:
            status = "[yellow]not converged[/yellow]"
        if optimum.budget_exceeded:
            status += " [red](iteration budget exceeded)[/red]"

        self.console.print()
        self.console.print(
            Panel(
                f"[bold]S = {self.format_efficiency(optimum.value)}[/bold]\n"
                f"{coords}\n"
                f"[dim]Grid best:[/dim] {scan.value:.6f} "
                f"[dim]({scan.evaluations} points, {len(scan.failures)} skipped)[/dim]\n"
                f"[dim]Refinement:[/dim] {status}, {optimum.iterations} iterations\n"
                f"[dim]Total evaluations:[/dim] {report.evaluations}",
                title="Optimum",
                box=box.ROUNDED,
                padding=(0, 1),
            )
        )

    def print_verification(self, report: "VerificationReport") -> None:
        """Print every check with pass/fail marks, then the notes."""
        self.console.print()
        self.console.rule("[bold blue]VERIFY[/bold blue]", style="blue")

        table = Table(box=box.SIMPLE, padding=(0, 1))
        table.add_column("", width=2)
        table.add_column("Check")
        table.add_column("Worst", justify="right")
        table.add_column("Tolerance", justify="right", style="dim")
        for check in report.checks:
            mark = "[green]✓[/green]" if check.passed else "[red]✗[/red]"
            table.add_row(mark, check.name, f"{check.worst:.2e}", f"{check.tolerance:.0e}")
        self.console.print(table)

        for note in report.notes:
            self.console.print(f"[dim]Note:[/dim] {note}")

        failure = report.first_failure
        if failure is None:
            self.print_success(f"All {len(report.checks)} checks passed")
        else:
            self.print_error(f"{failure.name} failed ({failure.detail})")

    def print_singlemode(self, s_max: float, best_omega: float, best_value: float) -> None:
        """Print the single-mode bound against the best tabulated setting."""
        table = Table(show_header=False, box=None, padding=(0, 2))
        table.add_column("Metric", style="dim")
        table.add_column("Value", style="bold")
        table.add_row("S_max", self.format_efficiency(s_max))
        table.add_row("Best tabulated", f"{best_value:.6f} at omega={best_omega:.4f}")
        self.console.print(table)

    def print_settings(self, settings: "Settings") -> None:
        """Print the active environment settings."""
        table = Table(show_header=False, box=None, padding=(0, 2))
        table.add_column("Setting", style="dim")
        table.add_column("Value")
        for name, value in settings.model_dump().items():
            table.add_row(name, str(value))
        self.console.print(table)

    def print_error(self, message: str) -> None:
        """Print an error message."""
        self.console.print(f"[bold red]Error:[/bold red] {message}")

    def print_warning(self, message: str) -> None:
        """Print a warning message."""
        self.console.print(f"[bold yellow]Warning:[/bold yellow] {message}")

    def print_success(self, message: str) -> None:
        """Print a success message."""
        self.console.print(f"[bold green]✓[/bold green] {message}")

    def create_progress(self) -> Progress:
        """Create a progress bar for long operations."""
        return Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            console=self.console,
        )
