"""Offline figure rendering for efcbound CSV reports."""

from .reader import EXPECTED_COLUMNS, ReportTable, SchemaError, read_report, validate_header
from .render import MODES, PlotSpec, render

__version__ = "0.1.0"

__all__ = [
    "EXPECTED_COLUMNS",
    "MODES",
    "PlotSpec",
    "ReportTable",
    "SchemaError",
    "read_report",
    "render",
    "validate_header",
]
