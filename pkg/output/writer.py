"""CSV and JSON result files with the run configuration embedded."""

import csv
import io
import json
import logging
from pathlib import Path

from pydantic import BaseModel, Field

from ..config import OutputFormat, RunConfig
from ..exceptions import UnwritablePathError

logger = logging.getLogger(__name__)

Row = dict[str, float | str]

SWEEP_COLUMNS = ("gamma_over_kappa", "omega", "phi", "delta", "S", "provenance")
SINGLEMODE_COLUMNS = ("omega", "phi", "split_probability")

SIGNIFICANT_DIGITS = 12


def format_value(value: float | str) -> str:
    """Fixed 12-significant-digit rendering used by every file format."""
    if isinstance(value, str):
        return value
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def _rounded(value: float | str) -> float | str:
    return value if isinstance(value, str) else float(format_value(value))


class ResultFile(BaseModel):
    """JSON layout of a result file."""

    config: dict[str, object]
    columns: list[str]
    rows: list[Row] = Field(default_factory=list)


class ResultWriter:
    """Serializes result tables to disk."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config

    def render(self, columns: tuple[str, ...], rows: list[Row]) -> str:
        """Render the file contents without touching the filesystem."""
        if self.config.format is OutputFormat.JSON:
            document = ResultFile(
                config=self.config.echo(),
                columns=list(columns),
                rows=[{c: _rounded(row[c]) for c in columns} for row in rows],
            )
            return document.model_dump_json(indent=2) + "\n"

        buffer = io.StringIO()
        buffer.write(f"# config: {json.dumps(self.config.echo(), sort_keys=True)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in columns])
        return buffer.getvalue()

    def write(self, path: Path, columns: tuple[str, ...], rows: list[Row]) -> Path:
        """
        Write a table to ``path``, creating parent directories.

        Raises:
            UnwritablePathError: If the directory or file cannot be written.
        """
        content = self.render(columns, rows)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content, encoding="utf-8")
        except OSError as e:
            raise UnwritablePathError(str(path), e.strerror or str(e)) from None
        logger.info("Wrote %d rows to %s", len(rows), path)
        return path
