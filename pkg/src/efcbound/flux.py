"""Flux functionals F and their derivatives dF/du.

The stepper and the CFL monitor consume F' directly, so each model carries
the analytic derivative alongside F; nothing is differentiated numerically.
Both callables accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class FluxModel:
    name: str
    eval_F: Callable
    eval_dF: Callable
    params: dict = field(default_factory=dict)


def linear_flux(a: float) -> FluxModel:
    """Linear transport flux F(u) = a*u with constant derivative a; a != 0."""
    if a == 0:
        raise ValueError("linear flux requires a nonzero speed a")
    a = float(a)

    def F(u):
        return a * u

    def dF(u):
        if np.ndim(u) == 0:
            return a
        return np.full(np.shape(u), a)

    return FluxModel(name="linear", eval_F=F, eval_dF=dF, params={"a": a})


def burgers_flux() -> FluxModel:
    """Quadratic flux F(u) = u^2 / 2, F'(u) = u."""

    def F(u):
        return 0.5 * u * u

    def dF(u):
        return u

    return FluxModel(name="burgers", eval_F=F, eval_dF=dF, params={})


def make_flux(name: str, **params) -> FluxModel:
    """Build a flux model by name, as selected from the harness config."""
    if name == "linear":
        if "a" not in params:
            raise ValueError("linear flux needs parameter 'a'")
        return linear_flux(params["a"])
    if name == "burgers":
        if params:
            raise ValueError(f"burgers flux takes no parameters, got {sorted(params)}")
        return burgers_flux()
    raise ValueError(f"unknown flux model {name!r}; available: linear, burgers")
