"""Explicit Euler-forward / centered-space (EFC) time stepping.

Interior nodes are advanced by

    u_j <- u_j - F'(u_j) * dt / (2h) * (u_{j+1} - u_{j-1}),   1 <= j <= P-1,

while both endpoint values stay pinned to the Dirichlet data every step.
The CFL ratio |F'(u)| * dt / h is monitored, never enforced: an unstable
configuration runs (until values stop being finite) and the report flags it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from .grid import Grid

# Slack on the CFL boundary case ratio == 1.
CFL_SLACK = 1e-12

# Initial data must match the boundary values this closely.
BOUNDARY_COMPAT_ATOL = 1e-9

InitialData = Union[Callable, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class Solution:
    """Node values of a finished run, one row per time step.

    ``values[n]`` is the solution at instant n*dt; row 0 is the sampled
    initial condition with its endpoints set to the boundary data, and every
    row keeps values[n][0] == u_a, values[n][-1] == u_b. ``update_count`` is
    the total number of interior-node updates performed, n_steps * (P - 1).
    Immutable once produced; safe to share across threads.
    """

    grid: Grid
    dt: float
    values: np.ndarray
    u_a: float
    u_b: float
    update_count: int

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1


@dataclass(frozen=True)
class CflReport:
    max_ratio: float
    satisfied: bool


class LinearStability(NamedTuple):
    dt_max: float
    C_N: float
    admissible: bool


def step(
    state: np.ndarray,
    model,
    dt: float,
    h: float,
    u_a: float,
    u_b: float,
) -> np.ndarray:
    """Advance one row by a single EFC update, endpoints pinned to (u_a, u_b)."""
    u = np.asarray(state, dtype=float)
    if u.ndim != 1 or u.size < 4:
        raise ValueError(f"state must be a 1-d row of at least 4 nodes, got shape {u.shape}")
    if not (dt > 0 and h > 0):
        raise ValueError(f"dt and h must be positive, got dt={dt}, h={h}")
    bad = np.flatnonzero(~np.isfinite(u))
    if bad.size:
        raise ValueError(f"non-finite state value at node {bad[0]}")
    out = np.empty_like(u)
    out[1:-1] = u[1:-1] - model.eval_dF(u[1:-1]) * (dt / (2.0 * h)) * (u[2:] - u[:-2])
    out[0] = u_a
    out[-1] = u_b
    return out


def _sample_initial(u0: InitialData, grid: Grid) -> np.ndarray:
    if callable(u0):
        # np.array copies: the callable may hand back the grid's own nodes
        vals = np.array(u0(grid.nodes), dtype=float)
        if vals.shape != grid.nodes.shape:
            # scalar-only callable; evaluate node by node
            vals = np.array([float(u0(float(x))) for x in grid.nodes], dtype=float)
    else:
        vals = np.array(u0, dtype=float)
        if vals.shape != grid.nodes.shape:
            raise ValueError(
                f"sampled initial data has {vals.size} entries, grid has {grid.n_nodes} nodes"
            )
    return vals


def _initial_row(u0: InitialData, grid: Grid, u_a: float, u_b: float) -> np.ndarray:
    row0 = _sample_initial(u0, grid)
    if abs(row0[0] - u_a) > BOUNDARY_COMPAT_ATOL or abs(row0[-1] - u_b) > BOUNDARY_COMPAT_ATOL:
        raise ValueError(
            f"initial data incompatible with boundary values: "
            f"u0(a)={row0[0]!r} vs u_a={u_a!r}, u0(b)={row0[-1]!r} vs u_b={u_b!r}"
        )
    row0[0] = u_a
    row0[-1] = u_b
    return row0


def solve(
    u0: InitialData,
    model,
    grid: Grid,
    dt: float,
    n_steps: int,
    u_a: float,
    u_b: float,
) -> Solution:
    """Run ``n_steps`` EFC steps from the sampled initial condition.

    Parameters
    ----------
    u0 : callable or sequence
        Initial condition, either a function of x (evaluated on the grid
        nodes) or a row of P + 1 samples. Must match (u_a, u_b) at the
        endpoints within 1e-9.
    model : FluxModel
        Flux functional with analytic derivative.
    grid : Grid
    dt : float
        Time step.
    n_steps : int
        Number of steps N >= 1; the result stores N + 1 rows.
    u_a, u_b : float
        Dirichlet boundary values, re-pinned every step.

    Raises
    ------
    FloatingPointError
        If a step produces non-finite values (instability); the message
        reports the first bad step index.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    values = np.empty((n_steps + 1, grid.n_nodes), dtype=float)
    values[0] = _initial_row(u0, grid, u_a, u_b)
    for n in range(n_steps):
        nxt = step(values[n], model, dt, grid.h, u_a, u_b)
        if not np.isfinite(nxt).all():
            raise FloatingPointError(
                f"non-finite values at step {n + 1} of {n_steps}: the run is unstable "
                f"(check the CFL ratio dt/h against |F'|)"
            )
        values[n + 1] = nxt
    values.setflags(write=False)
    return Solution(
        grid=grid,
        dt=dt,
        values=values,
        u_a=u_a,
        u_b=u_b,
        update_count=n_steps * (grid.P - 1),
    )


def solve_final(
    u0: InitialData,
    model,
    grid: Grid,
    dt: float,
    n_steps: int,
    u_a: float,
    u_b: float,
) -> tuple[np.ndarray, int]:
    """Low-memory variant of :func:`solve`: keep only the last row.

    Returns the final row and the interior-update count. Intended for cost
    benchmarking where the trajectory itself is not needed.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    row = _initial_row(u0, grid, u_a, u_b)
    for n in range(n_steps):
        row = step(row, model, dt, grid.h, u_a, u_b)
        if not np.isfinite(row).all():
            raise FloatingPointError(
                f"non-finite values at step {n + 1} of {n_steps}: the run is unstable"
            )
    return row, n_steps * (grid.P - 1)


def cfl_report(sol: Solution, model) -> CflReport:
    """Max of |F'(u)| * dt / h over every stored row and node."""
    speeds = np.abs(model.eval_dF(sol.values))
    max_ratio = float(np.max(speeds) * sol.dt / sol.grid.h)
    return CflReport(max_ratio=max_ratio, satisfied=max_ratio <= 1.0 + CFL_SLACK)


def linear_stability_params(a: float, h: float, n_steps: int, dt: float) -> LinearStability:
    """Stability envelope of the linear-flux case F(u) = a*u.

    The scheme is stable in the h-weighted 2-norm up to step N when
    dt <= (h/a)^2, with growth constant C_N = exp(N*dt/2); h <= |a| in
    addition makes the CFL ratio |a|*dt/h <= h/|a| <= 1.
    """
    if a == 0:
        raise ValueError("linear stability parameters require a nonzero speed a")
    if not (h > 0):
        raise ValueError(f"grid step must be positive, got h={h}")
    dt_max = (h / a) ** 2
    C_N = math.exp(n_steps * dt / 2.0)
    admissible = dt <= dt_max and h <= abs(a)
    return LinearStability(dt_max=dt_max, C_N=C_N, admissible=admissible)


def discrete_norm2(row: np.ndarray, h: float) -> float:
    """h-weighted 2-norm (h * sum u_j^2)^(1/2)."""
    u = np.asarray(row, dtype=float)
    if not np.isfinite(u).all():
        raise ValueError("norm of a non-finite row is undefined")
    return float(np.sqrt(h * np.sum(u * u)))
