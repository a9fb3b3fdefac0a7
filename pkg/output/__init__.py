"""Output formatting and result files."""

from .formatter import OutputFormatter
from .writer import SINGLEMODE_COLUMNS, SWEEP_COLUMNS, ResultFile, ResultWriter, format_value

__all__ = [
    "OutputFormatter",
    "ResultFile",
    "ResultWriter",
    "SINGLEMODE_COLUMNS",
    "SWEEP_COLUMNS",
    "format_value",
]
