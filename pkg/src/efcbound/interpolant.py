"""Per-interval cubic construction and the quadratic interpolant v = q'.

For each interior coarse interval (x_j, x_{j+1}) a cubic q(t) on [0, 1] is
fixed by four conditions: q(0) = p1, q(1) = p2, q'(0) = d1, q'(1) = d2,
where p1, p2 are the interval's node coordinates and d1, d2 the solver
values at those nodes after the last step. The interpolant solution is the
derivative v(t) = q'(t), a quadratic; it is deliberately built exactly this
way, coordinates as values and solution values as slopes, because the
error analysis downstream bounds |v(t_m) - u_m| for this v. The 4x4 system
is triangular after substitution, so coefficients come from closed forms,
not a generic linear solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver import Solution


@dataclass(frozen=True)
class CubicCoeffs:
    """q(t) = a3*t^3 + a2*t^2 + a1*t + a0 on [0, 1]."""

    a3: float
    a2: float
    a1: float
    a0: float

    def value(self, t):
        return ((self.a3 * t + self.a2) * t + self.a1) * t + self.a0

    def derivative(self, t):
        return (3.0 * self.a3 * t + 2.0 * self.a2) * t + self.a1


@dataclass(frozen=True)
class InterpolantPiece:
    """v(t) = c2*t^2 + c1*t + c0 over one coarse interval.

    Coefficients are the closed-form derivative of the interval's cubic:
    c2 = 6p1 - 6p2 + 3d1 + 3d2, c1 = -6p1 + 6p2 - 4d1 - 2d2, c0 = d1,
    so v(0) = d1 and v(1) = d2.
    """

    j: int
    p1: float
    p2: float
    d1: float
    d2: float
    c2: float
    c1: float
    c0: float

    def value(self, t):
        return (self.c2 * t + self.c1) * t + self.c0


@dataclass(frozen=True)
class InterpolantSolution:
    """Ordered pieces for interior intervals 1 <= j <= P-2 of a finished run."""

    pieces: tuple[InterpolantPiece, ...]
    source: Solution
    step: int


def cubic_coefficients(p1: float, p2: float, d1: float, d2: float) -> CubicCoeffs:
    """Solve the four endpoint conditions for the cubic's coefficients."""
    vals = (p1, p2, d1, d2)
    if not all(np.isfinite(v) for v in vals):
        raise ValueError(f"cubic inputs must be finite, got {vals}")
    a0 = p1
    a1 = d1
    a3 = 2.0 * p1 - 2.0 * p2 + d1 + d2
    a2 = p2 - p1 - d1 - a3
    return CubicCoeffs(a3=a3, a2=a2, a1=a1, a0=a0)


def piece_from_values(j: int, p1: float, p2: float, d1: float, d2: float) -> InterpolantPiece:
    """Build one interval's quadratic v directly from its closed form."""
    vals = (p1, p2, d1, d2)
    if not all(np.isfinite(v) for v in vals):
        raise ValueError(f"piece inputs must be finite, got {vals}")
    if not (p2 > p1):
        raise ValueError(f"interval endpoints must satisfy p2 > p1, got p1={p1}, p2={p2}")
    c2 = 6.0 * p1 - 6.0 * p2 + 3.0 * d1 + 3.0 * d2
    c1 = -6.0 * p1 + 6.0 * p2 - 4.0 * d1 - 2.0 * d2
    c0 = d1
    return InterpolantPiece(j=j, p1=p1, p2=p2, d1=d1, d2=d2, c2=c2, c1=c1, c0=c0)


def build_interpolant(sol: Solution, step: int | None = None) -> InterpolantSolution:
    """One piece per interior interval of the solution at the given step.

    ``step`` defaults to the last stored row. Boundary intervals (j = 0 and
    j = P-1) carry no piece; the harness reports them as uncovered.
    """
    if sol.grid.P < 3:
        raise ValueError("interpolant needs at least two interior nodes")
    if step is None:
        step = sol.n_steps
    row = sol.values[step]
    nodes = sol.grid.nodes
    pieces = tuple(
        piece_from_values(j, float(nodes[j]), float(nodes[j + 1]), float(row[j]), float(row[j + 1]))
        for j in range(1, sol.grid.P - 1)
    )
    return InterpolantSolution(pieces=pieces, source=sol, step=step)


def sample(piece: InterpolantPiece, r: int) -> np.ndarray:
    """Evaluate v at the subnode coordinates t_m = m/r for m = 0..r.

    r must be even and >= 2, matching the grid refinement; the first and
    last samples reproduce d1 and d2.
    """
    if r < 2 or r % 2 != 0:
        raise ValueError(f"subdivision count must be an even integer >= 2, got r={r}")
    t = np.arange(r + 1, dtype=float) / r
    return (piece.c2 * t + piece.c1) * t + piece.c0
