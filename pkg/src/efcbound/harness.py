"""Experiment configuration, the coarse/fine comparison run, CSV and summary.

A run samples the initial condition on a coarse grid and on its r-fold
refinement, advances N steps of length dt on the coarse grid and N*r steps
of length dt/r on the fine one, interpolates the coarse result, and checks
every bound family against the measured per-subnode errors. Identical
configs produce byte-identical CSVs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np
import yaml

from .bounds import FAMILY_NAMES, BoundReport, compare, epsilon_from_initial
from .flux import FluxModel, make_flux
from .grid import make_grid, refine
from .interpolant import build_interpolant
from .solver import BOUNDARY_COMPAT_ATOL, solve

CSV_COLUMNS = (
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

U0_KINDS = ("constant", "affine", "sine", "table")


def _cfg_error(fieldname: str, message) -> ValueError:
    return ValueError(f"config field '{fieldname}': {message}")


def _u0_from_spec(kind: str, params: dict) -> Callable:
    """Initial-condition callable from its config spec; array-friendly."""
    if kind == "constant":
        value = float(params["value"])
        return lambda x: np.full(np.shape(x), value)
    if kind == "affine":
        c0 = float(params["intercept"])
        c1 = float(params["slope"])
        return lambda x: c0 + c1 * np.asarray(x, dtype=float)
    if kind == "sine":
        amp = float(params["amplitude"])
        freq = float(params["frequency"])
        offset = float(params.get("offset", 0.0))
        return lambda x: amp * np.sin(freq * np.asarray(x, dtype=float)) + offset
    if kind == "table":
        points = np.asarray(params["points"], dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 2:
            raise ValueError("table needs 'points' as a list of [x, u] pairs (>= 2)")
        xs, ys = points[:, 0], points[:, 1]
        if not np.all(np.diff(xs) > 0):
            raise ValueError("table x values must be strictly increasing")
        return lambda x: np.interp(x, xs, ys)
    raise ValueError(f"unknown u0 kind {kind!r}; available: {', '.join(U0_KINDS)}")


_U0_REQUIRED = {
    "constant": ("value",),
    "affine": ("intercept", "slope"),
    "sine": ("amplitude", "frequency"),
    "table": ("points",),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment; every solver precondition is re-checked
    at load time so that a constructed config always runs."""

    a: float
    b: float
    flux_name: str
    flux_params: dict
    u0_kind: str
    u0_params: dict
    h: float
    dt: float
    n_steps: int
    r: int
    boundary_mode: str  # "from_u0" or "explicit"
    u_a: float
    u_b: float
    outputs: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ValueError(f"config must be a mapping, got {type(raw).__name__}")
        for key in ("domain", "flux", "u0", "h", "dt", "n_steps", "r"):
            if key not in raw:
                raise _cfg_error(key, "missing")

        domain = raw["domain"]
        try:
            a, b = float(domain["a"]), float(domain["b"])
        except (TypeError, KeyError) as exc:
            raise _cfg_error("domain", f"needs numeric 'a' and 'b' ({exc})") from None
        if not b > a:
            raise _cfg_error("domain", f"must satisfy b > a, got a={a}, b={b}")

        flux_spec = dict(raw["flux"])
        flux_name = flux_spec.pop("name", None)
        if flux_name is None:
            raise _cfg_error("flux", "needs a 'name'")
        try:
            make_flux(flux_name, **flux_spec)
        except ValueError as exc:
            raise _cfg_error("flux", exc) from None

        u0_spec = dict(raw["u0"])
        u0_kind = u0_spec.pop("kind", None)
        if u0_kind not in U0_KINDS:
            raise _cfg_error("u0", f"kind must be one of {', '.join(U0_KINDS)}, got {u0_kind!r}")
        missing = [k for k in _U0_REQUIRED[u0_kind] if k not in u0_spec]
        if missing:
            raise _cfg_error("u0", f"kind {u0_kind!r} needs {', '.join(missing)}")
        try:
            u0 = _u0_from_spec(u0_kind, u0_spec)
        except (ValueError, TypeError) as exc:
            raise _cfg_error("u0", exc) from None

        h = float(raw["h"])
        try:
            grid = make_grid(a, b, h)
        except ValueError as exc:
            raise _cfg_error("h", exc) from None

        dt = float(raw["dt"])
        if not dt > 0:
            raise _cfg_error("dt", f"must be positive, got {dt}")
        n_steps = raw["n_steps"]
        if not isinstance(n_steps, int) or n_steps < 1:
            raise _cfg_error("n_steps", f"must be an integer >= 1, got {n_steps!r}")
        r = raw["r"]
        if not isinstance(r, int):
            raise _cfg_error("r", f"must be an integer, got {r!r}")
        try:
            refine(grid, r)
        except ValueError as exc:
            raise _cfg_error("r", exc) from None

        boundary = raw.get("boundary", "from_u0")
        u0_a, u0_b = float(np.asarray(u0(a))), float(np.asarray(u0(b)))
        if boundary == "from_u0":
            mode, u_a, u_b = "from_u0", u0_a, u0_b
        elif isinstance(boundary, dict) and {"u_a", "u_b"} <= set(boundary):
            mode, u_a, u_b = "explicit", float(boundary["u_a"]), float(boundary["u_b"])
            if abs(u_a - u0_a) > BOUNDARY_COMPAT_ATOL or abs(u_b - u0_b) > BOUNDARY_COMPAT_ATOL:
                raise _cfg_error(
                    "boundary",
                    f"explicit values (u_a={u_a}, u_b={u_b}) do not match the initial "
                    f"condition at the endpoints (u0(a)={u0_a}, u0(b)={u0_b}) within "
                    f"{BOUNDARY_COMPAT_ATOL}",
                )
        else:
            raise _cfg_error("boundary", f"must be 'from_u0' or a u_a/u_b mapping, got {boundary!r}")

        outputs = raw.get("outputs", {}) or {}
        if not isinstance(outputs, dict):
            raise _cfg_error("outputs", "must be a mapping of output names to paths")
        checks = raw.get("checks", {}) or {}
        if not isinstance(checks, dict):
            raise _cfg_error("checks", "must be a mapping of family names to booleans")
        unknown = sorted(set(checks) - set(FAMILY_NAMES))
        if unknown:
            raise _cfg_error(
                "checks", f"unknown families {unknown}; available: {', '.join(FAMILY_NAMES)}"
            )

        return cls(
            a=a,
            b=b,
            flux_name=flux_name,
            flux_params=flux_spec,
            u0_kind=u0_kind,
            u0_params=u0_spec,
            h=h,
            dt=dt,
            n_steps=n_steps,
            r=r,
            boundary_mode=mode,
            u_a=u_a,
            u_b=u_b,
            outputs=dict(outputs),
            checks={k: bool(v) for k, v in checks.items()},
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
        return cls.from_dict(raw)

    def flux_model(self) -> FluxModel:
        return make_flux(self.flux_name, **self.flux_params)

    def u0_callable(self) -> Callable:
        return _u0_from_spec(self.u0_kind, self.u0_params)


@dataclass(frozen=True)
class CostCounters:
    """Interior-update counts of both solves plus interpolation work.

    The exact update ratio is r*(P*r - 1)/(P - 1), slightly above r^2 and
    tending to r^2 for large P. Wall-clock times are informational only.
    """

    coarse_updates: int
    fine_updates: int
    interp_ops: int
    wall_coarse: float
    wall_fine: float

    @property
    def exact_ratio(self) -> Fraction:
        return Fraction(self.fine_updates, self.coarse_updates)


def run(config: ExperimentConfig) -> tuple[BoundReport, CostCounters]:
    """Execute one experiment: both solves, interpolation, bound comparison.

    Deterministic for a fixed config (modulo the wall-clock fields).
    """
    grid = make_grid(config.a, config.b, config.h)
    refined = refine(grid, config.r)
    model = config.flux_model()
    u0 = config.u0_callable()

    t0 = time.perf_counter()
    coarse = solve(u0, model, grid, config.dt, config.n_steps, config.u_a, config.u_b)
    wall_coarse = time.perf_counter() - t0
    t0 = time.perf_counter()
    fine = solve(
        u0,
        model,
        refined.fine,
        config.dt / config.r,
        config.n_steps * config.r,
        config.u_a,
        config.u_b,
    )
    wall_fine = time.perf_counter() - t0

    interp = build_interpolant(coarse)
    ctx = epsilon_from_initial(fine.values[0], config.n_steps * config.r)
    report = compare(coarse, fine, interp, ctx, model=model)
    counters = CostCounters(
        coarse_updates=coarse.update_count,
        fine_updates=fine.update_count,
        interp_ops=(grid.P - 2) * (config.r + 2),
        wall_coarse=wall_coarse,
        wall_fine=wall_fine,
    )
    return report, counters


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_csv(report: BoundReport, path) -> None:
    """Write one row per (interval, subnode) in the fixed column order.

    Floats carry 17 significant digits; inapplicable bounds stay empty;
    the file is newline-terminated. An empty report yields a header-only
    file.
    """
    lines = [",".join(CSV_COLUMNS)]
    for row in report.rows:
        lines.append(
            ",".join(
                (
                    str(row.j),
                    str(row.m),
                    _fmt(row.x),
                    _fmt(row.t_m),
                    _fmt(row.v_m),
                    _fmt(row.u_m),
                    _fmt(row.abs_err),
                    _fmt(row.thm1),
                    "" if row.cor4 is None else _fmt(row.cor4),
                    "" if row.cor5 is None else _fmt(row.cor5),
                    "1" if row.turbulent else "0",
                )
            )
        )
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV report to {path}: {exc}") from None


def summarize(report: BoundReport, counters: CostCounters) -> str:
    """Human-readable run summary: worst error and tightness, per-family
    verdicts, turbulence and coverage, cost counters, CFL status."""
    ctx = report.eps_ctx
    lines = [
        f"max abs error: {report.max_err:.17g}",
        f"max tightness (err/bound): {report.max_tightness:.17g}",
        (
            f"epsilon: {ctx.eps:.17g} (M={ctx.M}, max initial diff "
            f"{ctx.max_initial_diff:.17g}, hypothesis holds: "
            f"{'yes' if ctx.hypothesis_holds else 'no'})"
        ),
    ]
    if report.cfl_coarse is not None and report.cfl_fine is not None:
        ok = report.cfl_coarse.satisfied and report.cfl_fine.satisfied
        worst = max(report.cfl_coarse.max_ratio, report.cfl_fine.max_ratio)
        lines.append(f"CFL: {'SATISFIED' if ok else 'VIOLATED'} (max ratio {worst:.6g})")
    for name in FAMILY_NAMES:
        fam = report.families[name]
        if fam.checked == 0:
            lines.append(f"{name}: n/a")
        elif fam.ok:
            lines.append(f"{name}: PASS ({fam.passed}/{fam.checked})")
        else:
            lines.append(
                f"{name}: FAIL ({fam.passed}/{fam.checked}, worst excess {fam.max_excess:.6g})"
            )
    turb = ", ".join(f"j={j}" for j in report.turbulent_intervals) or "none"
    lines.append(f"turbulent intervals: {turb}")
    if report.limit_case_intervals:
        limit = ", ".join(f"j={j}" for j in report.limit_case_intervals)
        lines.append(f"limit-case intervals (zero endpoint values, bound (3/2)h + eps): {limit}")
    lines.append(
        "uncovered boundary intervals: "
        f"j={report.uncovered_intervals[0]}, j={report.uncovered_intervals[1]}"
    )
    lines.append(
        f"cost ratio: {report.cost_ratio:.6g} (fine {counters.fine_updates} / coarse "
        f"{counters.coarse_updates} interior updates; r^2 = {report.r ** 2})"
    )
    lines.append(f"interpolant ops: {counters.interp_ops} (pieces built + samples evaluated)")
    lines.append(
        f"wall: coarse {counters.wall_coarse * 1e3:.3f} ms, fine {counters.wall_fine * 1e3:.3f} ms"
    )
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    """Load and validate a YAML experiment config from disk."""
    p = Path(path)
    if not p.is_file():
        raise ValueError(f"config file not found: {p}")
    return ExperimentConfig.from_file(p)
