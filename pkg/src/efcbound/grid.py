"""Uniform 1D grids and their even refinements.

The pipeline works on a pair of partitions of the same interval [a, b]:
a coarse grid with step h, and a fine grid with step k = h / r for an even
refinement factor r. Coarse node j coincides with fine node j*r, and the
position of fine node j*r + m inside coarse interval j is the local
coordinate t_m = m / r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative tolerance for "(b - a) / h is an integer" at construction.
DIVISIBILITY_RTOL = 1e-9

# Absolute tolerance for node-coincidence identities between grids.
NODE_ATOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform partition of [a, b] into P intervals of width h.

    Nodes are computed as a + j*h (never by cumulative addition) so that
    coordinates are deterministic and refinement-consistent; the last node
    is forced to b. Immutable after construction.
    """

    a: float
    b: float
    h: float
    P: int
    nodes: np.ndarray

    def __post_init__(self) -> None:
        if self.P < 3:
            raise ValueError(f"grid needs at least two interior nodes (P >= 3), got P={self.P}")
        drift = abs(self.a + self.P * self.h - self.b)
        if drift > NODE_ATOL * max(1.0, abs(self.b - self.a)):
            raise ValueError(f"P*h does not reach b: |a + P*h - b| = {drift:.3e}")
        if not np.all(np.diff(self.nodes) > 0.0):
            raise ValueError("grid nodes must be strictly increasing")
        self.nodes.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return self.P + 1


@dataclass(frozen=True)
class RefinedGrid:
    """A coarse grid together with its r-fold refinement (step k = h / r).

    Fine node j*r coincides with coarse node j; ``s`` is the fine substep,
    equal to the fine grid's h.
    """

    coarse: Grid
    r: int
    fine: Grid
    s: float

    def __post_init__(self) -> None:
        if self.fine.P != self.coarse.P * self.r:
            raise ValueError(
                f"fine grid has P={self.fine.P}, expected {self.coarse.P * self.r}"
            )
        worst = float(np.max(np.abs(self.fine.nodes[:: self.r] - self.coarse.nodes)))
        if worst > NODE_ATOL:
            raise ValueError(f"coarse/fine node mismatch up to {worst:.3e}")

    def fine_index(self, j: int, m: int = 0) -> int:
        """Fine-grid index of subnode m inside coarse interval j."""
        return j * self.r + m


def _uniform_nodes(a: float, b: float, h: float, P: int) -> np.ndarray:
    nodes = a + np.arange(P + 1, dtype=float) * h
    nodes[-1] = b
    return nodes


def make_grid(a: float, b: float, h: float) -> Grid:
    """Build the uniform partition of [a, b] with step h.

    (b - a) / h must be an integer >= 3 up to a relative tolerance of
    1e-9; otherwise the residual is reported and the grid is rejected.
    """
    if not (b > a):
        raise ValueError(f"domain endpoints must satisfy b > a, got a={a}, b={b}")
    if not (h > 0):
        raise ValueError(f"grid step must be positive, got h={h}")
    ratio = (b - a) / h
    P = int(round(ratio))
    residual = abs(ratio - P)
    if residual > DIVISIBILITY_RTOL * max(1.0, abs(ratio)):
        raise ValueError(
            f"step h={h} does not divide [{a}, {b}]: (b-a)/h = {ratio!r}, "
            f"residual {residual:.3e} from nearest integer {P}"
        )
    if P < 3:
        raise ValueError(f"step h={h} yields only P={P} intervals; need P >= 3")
    return Grid(a=a, b=b, h=h, P=P, nodes=_uniform_nodes(a, b, h, P))


def refine(g: Grid, r: int) -> RefinedGrid:
    """Refine every interval of ``g`` into r subintervals; r must be even, >= 2."""
    if r < 2 or r % 2 != 0:
        raise ValueError(f"refinement factor must be an even integer >= 2, got r={r}")
    k = g.h / r
    fine = Grid(a=g.a, b=g.b, h=k, P=g.P * r, nodes=_uniform_nodes(g.a, g.b, k, g.P * r))
    return RefinedGrid(coarse=g, r=r, fine=fine, s=k)


def local_coordinate(m: int, r: int) -> float:
    """Position t_m = m / r of subnode m in [0, 1] along a coarse interval."""
    if r < 1:
        raise ValueError(f"subdivision count must be >= 1, got r={r}")
    if not (0 <= m <= r):
        raise ValueError(f"subnode index m={m} outside [0, {r}]")
    return m / r
