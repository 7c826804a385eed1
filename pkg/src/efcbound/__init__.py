"""Coarse-grid EFC solver with interpolant accuracy bounds.

Solves 1D scalar conservation laws u_t + F(u)_x = 0 with an explicit
Euler-forward / centered-space scheme on a coarse grid, builds a per-interval
quadratic interpolant of the result, and verifies a family of a-priori error
bounds against the matching fine-grid run.
"""

from .bounds import (
    BoundReport,
    BoundRow,
    EpsilonContext,
    FamilyResult,
    compare,
    corollary3_delta,
    corollary4_bound,
    corollary5_bound,
    detect_turbulence,
    epsilon_from_initial,
    lemma1_check,
    prop1_s,
    prop23_bound,
    theorem1_bound,
    theorem2_select_r,
)
from .flux import FluxModel, burgers_flux, linear_flux, make_flux
from .grid import Grid, RefinedGrid, local_coordinate, make_grid, refine
from .harness import CostCounters, ExperimentConfig, emit_csv, load_config, run, summarize
from .interpolant import (
    CubicCoeffs,
    InterpolantPiece,
    InterpolantSolution,
    build_interpolant,
    cubic_coefficients,
    piece_from_values,
    sample,
)
from .solver import (
    CflReport,
    LinearStability,
    Solution,
    cfl_report,
    discrete_norm2,
    linear_stability_params,
    solve,
    solve_final,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BoundRow",
    "CflReport",
    "CostCounters",
    "CubicCoeffs",
    "EpsilonContext",
    "ExperimentConfig",
    "FamilyResult",
    "FluxModel",
    "Grid",
    "InterpolantPiece",
    "InterpolantSolution",
    "LinearStability",
    "RefinedGrid",
    "Solution",
    "build_interpolant",
    "burgers_flux",
    "cfl_report",
    "compare",
    "corollary3_delta",
    "corollary4_bound",
    "corollary5_bound",
    "cubic_coefficients",
    "detect_turbulence",
    "discrete_norm2",
    "emit_csv",
    "epsilon_from_initial",
    "lemma1_check",
    "linear_flux",
    "linear_stability_params",
    "load_config",
    "local_coordinate",
    "make_flux",
    "make_grid",
    "piece_from_values",
    "prop1_s",
    "prop23_bound",
    "refine",
    "run",
    "sample",
    "solve",
    "solve_final",
    "step",
    "summarize",
    "theorem1_bound",
    "theorem2_select_r",
]
