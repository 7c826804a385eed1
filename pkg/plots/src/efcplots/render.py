"""Figure rendering for report CSVs.

Three modes:

* ``error_vs_bound``: measured |v - u| against the per-subnode bound, by x.
* ``solution_overlay``: interpolant and fine-run values, by x.
* ``cost``: per-step interior-update counts of both grids, derived from the
  report's structure (P from the piece count, r from the subnode index),
  with the r^2 asymptote marked.

Outputs are deterministic: the Agg backend is forced and embedded
timestamps are disabled, so re-rendering a CSV reproduces the image bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reader import ReportTable, read_report

MODES = ("error_vs_bound", "solution_overlay", "cost")

matplotlib.rcParams["svg.hashsalt"] = "efcplots"


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    output_path: str
    mode: str


def _save(fig, path: Path) -> None:
    # strip the format-specific timestamp metadata so renders are idempotent
    metadata = {}
    suffix = path.suffix.lower()
    if suffix == ".svg":
        metadata = {"Date": None}
    elif suffix == ".pdf":
        metadata = {"CreationDate": None}
    fig.savefig(path, metadata=metadata or None)
    plt.close(fig)


def _plot_error_vs_bound(table: ReportTable, ax) -> None:
    ax.plot(table.x, table.abs_err, marker="o", markersize=3, label="|v - u|")
    ax.plot(table.x, table.thm1_bound, linestyle="--", label="bound")
    ax.set_xlabel("x")
    ax.set_ylabel("error")
    ax.legend(loc="best")
    ax.set_title("measured error vs a-priori bound")


def _plot_solution_overlay(table: ReportTable, ax) -> None:
    ax.plot(table.x, table.v_m, marker="o", markersize=3, label="interpolant v")
    ax.plot(table.x, table.u_m, marker="x", markersize=3, label="fine run u")
    ax.set_xlabel("x")
    ax.set_ylabel("value")
    ax.legend(loc="best")
    ax.set_title("interpolant vs fine-grid solution")


def _plot_cost(table: ReportTable, ax) -> None:
    if len(table):
        # interior pieces cover j = 1 .. P-2, so P = pieces + 2
        P = table.n_pieces + 2
        r = table.r
        coarse = P - 1
        fine = r * (P * r - 1)
        ax.bar(["coarse", "fine"], [coarse, fine], color=["tab:blue", "tab:orange"])
        ax.axhline(coarse * r * r, linestyle=":", color="gray", label=f"r^2 x coarse = {coarse * r * r}")
        ax.set_ylabel("interior updates per coarse step")
        ax.set_title(f"update cost per step (ratio {fine / coarse:.3f}, r^2 = {r * r})")
        ax.legend(loc="best")
    else:
        ax.set_title("update cost per step (no data)")


def render(spec: PlotSpec) -> Path:
    """Render one CSV to one image file; returns the output path."""
    if spec.mode not in MODES:
        raise ValueError(f"unknown mode {spec.mode!r}; available: {', '.join(MODES)}")
    table = read_report(spec.csv_path)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if spec.mode == "error_vs_bound":
        _plot_error_vs_bound(table, ax)
    elif spec.mode == "solution_overlay":
        _plot_solution_overlay(table, ax)
    else:
        _plot_cost(table, ax)
    out = Path(spec.output_path)
    _save(fig, out)
    return out
