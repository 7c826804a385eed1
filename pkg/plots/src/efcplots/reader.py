"""Strict reader for the harness CSV report.

The CSV header is the sole coupling to the solver package, so it is
validated column by column rather than read positionally; the first wrong
column is named in the error. Empty cells in the optional bound columns
become NaN.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

EXPECTED_COLUMNS = (
    "j",
    "m",
    "x",
    "t_m",
    "v_m",
    "u_m",
    "abs_err",
    "thm1_bound",
    "cor4_bound",
    "cor5_bound",
    "turbulent",
)


class SchemaError(ValueError):
    """The CSV header does not match the report contract."""


def validate_header(columns) -> None:
    """Reject any header that is not exactly the report contract.

    Raises SchemaError naming the first offending column.
    """
    columns = list(columns)
    for i, expected in enumerate(EXPECTED_COLUMNS):
        if i >= len(columns):
            raise SchemaError(f"column {i + 1}: expected '{expected}', header ends early")
        if columns[i] != expected:
            raise SchemaError(f"column {i + 1}: expected '{expected}', got '{columns[i]}'")
    if len(columns) > len(EXPECTED_COLUMNS):
        raise SchemaError(
            f"column {len(EXPECTED_COLUMNS) + 1}: unexpected extra column "
            f"'{columns[len(EXPECTED_COLUMNS)]}'"
        )


@dataclass(frozen=True)
class ReportTable:
    """Column arrays of one report; optional bounds hold NaN where absent."""

    j: np.ndarray
    m: np.ndarray
    x: np.ndarray
    t_m: np.ndarray
    v_m: np.ndarray
    u_m: np.ndarray
    abs_err: np.ndarray
    thm1_bound: np.ndarray
    cor4_bound: np.ndarray
    cor5_bound: np.ndarray
    turbulent: np.ndarray

    def __len__(self) -> int:
        return self.j.size

    @property
    def n_pieces(self) -> int:
        return np.unique(self.j).size

    @property
    def r(self) -> int:
        return int(self.m.max()) if len(self) else 0


def _optional(cell: str) -> float:
    return float(cell) if cell != "" else float("nan")


def read_report(path) -> ReportTable:
    """Parse a report CSV, enforcing the exact header contract."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("column 1: expected 'j', file is empty") from None
        validate_header(header)
        rows = [row for row in reader if row]
    columns = list(zip(*rows)) if rows else [[] for _ in EXPECTED_COLUMNS]
    return ReportTable(
        j=np.array([int(v) for v in columns[0]], dtype=int),
        m=np.array([int(v) for v in columns[1]], dtype=int),
        x=np.array([float(v) for v in columns[2]], dtype=float),
        t_m=np.array([float(v) for v in columns[3]], dtype=float),
        v_m=np.array([float(v) for v in columns[4]], dtype=float),
        u_m=np.array([float(v) for v in columns[5]], dtype=float),
        abs_err=np.array([float(v) for v in columns[6]], dtype=float),
        thm1_bound=np.array([float(v) for v in columns[7]], dtype=float),
        cor4_bound=np.array([_optional(v) for v in columns[8]], dtype=float),
        cor5_bound=np.array([_optional(v) for v in columns[9]], dtype=float),
        turbulent=np.array([v == "1" for v in columns[10]], dtype=bool),
    )
