"""Closed-form accuracy bounds and their empirical verification.

Everything here revolves around the smallness parameter eps of the
adjacent-difference hypothesis on the fine grid's initial samples,

    max_i |u0_i - u0_{i+1}|  <=  eps / 3^M,

where M is the fine step count. Under that hypothesis (and a CFL-satisfying
run) the per-subnode error of the interpolant obeys

    |v_m - u_m|  <=  (3/2) h + (3/4) |d1 + d2| + (min(m, r - m) + 3) eps,

with sharper variants in the linear-flux and sign-change (turbulence)
cases. :func:`compare` evaluates every bound against the measured errors of
a coarse/fine solution pair and records pass/fail per family; nothing is
assumed.

Inequality checks use an absolute slack of 1e-9 (bounds are O(h) sized and
rounding accumulates over M steps), except the adjacent-value check at step
N which is tight enough for 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import NODE_ATOL
from .interpolant import InterpolantSolution, sample
from .solver import CflReport, Solution, cfl_report, discrete_norm2, linear_stability_params

INEQ_SLACK = 1e-9
ADJACENT_SLACK = 1e-12

FAMILY_NAMES = (
    "theorem1",
    "cor2",
    "prop4",
    "prop5",
    "prop6",
    "prop7_8",
    "prop9_10",
    "cor4",
    "cor5",
    "limit_case",
    "stability",
)


def _pow3(n: int) -> float:
    """3^n as a float, rejecting exponents beyond double range."""
    try:
        value = 3.0 ** n
    except OverflowError:
        raise OverflowError(
            f"3^{n} exceeds the double range; the hypothesis is vacuous at this "
            f"scale, use a smaller step count"
        ) from None
    if not math.isfinite(value):
        raise OverflowError(f"3^{n} exceeds the double range; use a smaller step count")
    return value


@dataclass(frozen=True)
class EpsilonContext:
    """Smallness parameter eps for a fine run of M steps.

    ``max_initial_diff`` is the measured max adjacent difference of the fine
    initial samples; the hypothesis holds iff max_initial_diff * 3^M <= eps
    (up to 1e-12 relative).
    """

    M: int
    eps: float
    max_initial_diff: float

    @property
    def hypothesis_holds(self) -> bool:
        return self.max_initial_diff * _pow3(self.M) <= self.eps * (1.0 + 1e-12)


def epsilon_from_initial(fine_u0: np.ndarray, M: int) -> EpsilonContext:
    """Tightest eps satisfying the hypothesis for the given initial samples.

    eps = 3^M * max_i |u0_i - u0_{i+1}|; the hypothesis then holds with
    equality. 3^M is evaluated in floating point and rejected on overflow
    (a bound beyond double range is meaningless for comparison).
    """
    if M < 1:
        raise ValueError(f"fine step count must be >= 1, got M={M}")
    row = np.asarray(fine_u0, dtype=float)
    if row.ndim != 1 or row.size < 2:
        raise ValueError(f"initial samples must be a row of >= 2 values, got shape {row.shape}")
    if not np.isfinite(row).all():
        raise ValueError("initial samples must be finite")
    max_diff = float(np.max(np.abs(np.diff(row))))
    eps = max_diff * _pow3(M)
    if not math.isfinite(eps):
        raise OverflowError(
            f"eps = 3^{M} * {max_diff:.3e} overflows; use a smaller step count"
        )
    return EpsilonContext(M=M, eps=eps, max_initial_diff=max_diff)


def prop1_s(t: float) -> float:
    """Slack s in [0, 1] with t^2 = t - s/4, for t in [0, 1].

    This is the quadratic's defect 4(t - t^2), maximal (s = 1) at t = 1/2.
    Distinct from the fine substep also conventionally called s.
    """
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return 4.0 * (t - t * t)


def prop23_bound(h: float, d1: float, d2: float) -> float:
    """Spread bound for the quadratic: |v(t) - v(1)| and |v(t) - v(0)| both
    stay within (3/2) h + 2 |d1 - d2| + (3/4) |d1 + d2|."""
    if not (h > 0):
        raise ValueError(f"interval width must be positive, got h={h}")
    return 1.5 * h + 2.0 * abs(d1 - d2) + 0.75 * abs(d1 + d2)


def _theorem1_value(h: float, d1: float, d2: float, m: int, r: int, eps: float) -> float:
    return 1.5 * h + 0.75 * abs(d1 + d2) + (min(m, r - m) + 3) * eps


def theorem1_bound(h: float, d1: float, d2: float, m: int, r: int, eps: float) -> float:
    """Per-subnode error bound (3/2)h + (3/4)|d1+d2| + (min(m, r-m)+3) eps."""
    if not (h > 0):
        raise ValueError(f"interval width must be positive, got h={h}")
    if not (1 <= m <= r):
        raise ValueError(f"subnode index m={m} outside [1, {r}]")
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    return _theorem1_value(h, d1, d2, m, r, eps)


def corollary3_delta(eps: float, m: int, r: int, M: int) -> float:
    """Initial-difference threshold delta = (eps / (min(m, r-m) + 3)) / 3^M.

    When the fine initial differences stay below delta, the error at subnode
    m is within (3/2)h + (3/4)|d1+d2| + eps. eps = 0 degenerates to 0
    (only constant data qualifies).
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    if not (1 <= m <= r):
        raise ValueError(f"subnode index m={m} outside [1, {r}]")
    if M < 1:
        raise ValueError(f"fine step count must be >= 1, got M={M}")
    mu = eps / (min(m, r - m) + 3)
    return mu / _pow3(M)


def theorem2_select_r(u0, a: float, b: float, eps: float, n_steps: int, r_max: int):
    """Smallest even refinement r <= r_max making the eps-hypothesis reachable
    for continuous initial data, or None when the bounded search fails.

    The continuity margin delta(eps), the largest spacing at which any two
    samples of u0 that far apart differ by at most eps, is probed by dense
    sampling at 10 * r_max * n_steps points; r qualifies when
    eps / 3^(r * n_steps) <= delta(eps). The probe can under-resolve very
    rough data, in which case None is returned honestly.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if n_steps <= 1:
        raise ValueError(f"coarse step count must be > 1, got {n_steps}")
    if r_max < 2:
        raise ValueError(f"r_max must be >= 2, got {r_max}")
    if not (b > a):
        raise ValueError(f"domain endpoints must satisfy b > a, got a={a}, b={b}")
    n_probe = 10 * r_max * n_steps
    xs = np.linspace(a, b, n_probe)
    ys = np.asarray(u0(xs), dtype=float)
    if ys.shape != xs.shape:
        ys = np.array([float(u0(float(x))) for x in xs], dtype=float)
    spacing = (b - a) / (n_probe - 1)
    delta = 0.0
    for gap in range(1, n_probe):
        if float(np.max(np.abs(ys[gap:] - ys[:-gap]))) > eps:
            break
        delta = gap * spacing
    if delta <= 0.0:
        return None
    log_need = math.log(eps) - math.log(delta)  # need r * n_steps * log 3 >= this
    for r in range(2, r_max + 1, 2):
        if r * n_steps * math.log(3.0) >= log_need:
            return r
    return None


def lemma1_check(values, i: int, j: int) -> tuple[float, float]:
    """Pair-sum inequality: values[i] + values[j] <= 2 (sum values^2)^(1/2).

    Requires strictly positive entries; returns (lhs, rhs).
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"values must be a nonempty 1-d sequence, got shape {arr.shape}")
    if not np.isfinite(arr).all() or np.any(arr <= 0.0):
        raise ValueError("all entries must be finite and strictly positive")
    if not (0 <= i < arr.size and 0 <= j < arr.size):
        raise ValueError(f"indices ({i}, {j}) out of range for {arr.size} values")
    lhs = float(arr[i] + arr[j])
    rhs = float(2.0 * math.sqrt(float(np.sum(arr * arr))))
    return lhs, rhs


def corollary4_bound(
    h: float,
    a_dom: float,
    b_dom: float,
    n_steps: int,
    dt: float,
    u0_sup: float,
    eps: float,
) -> float:
    """Uniform linear-case bound
    (3/2) [h + ((b-a)/h + 1)^(1/2) e^(N dt / 2) |u0|_inf] + eps."""
    if not (h > 0):
        raise ValueError(f"grid step must be positive, got h={h}")
    if not (b_dom > a_dom):
        raise ValueError(f"domain endpoints must satisfy b > a, got a={a_dom}, b={b_dom}")
    if u0_sup < 0:
        raise ValueError(f"|u0|_inf must be nonnegative, got {u0_sup}")
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    span = (b_dom - a_dom) / h + 1.0
    return 1.5 * (h + math.sqrt(span) * math.exp(n_steps * dt / 2.0) * u0_sup) + eps


def detect_turbulence(row) -> list[int]:
    """Interval indices j where the row changes sign, row[j] * row[j+1] < 0.

    The product is strictly negative: a zero at either node produces no
    interval (that is the limit case, reported separately by compare()).
    """
    arr = np.asarray(row, dtype=float)
    if not np.isfinite(arr).all():
        raise ValueError("row must be finite")
    return np.flatnonzero(arr[:-1] * arr[1:] < 0.0).tolist()


def corollary5_bound(h: float, eps: float) -> float:
    """Error bound (1/2)(3h + 5 eps) on sign-change intervals."""
    if not (h > 0):
        raise ValueError(f"interval width must be positive, got h={h}")
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    return 0.5 * (3.0 * h + 5.0 * eps)


@dataclass(frozen=True)
class BoundRow:
    """Measured error and bounds at one subnode of one interior interval.

    cor3/cor4/cor5 are None where their hypotheses do not apply.
    """

    j: int
    m: int
    x: float
    t_m: float
    v_m: float
    u_m: float
    abs_err: float
    thm1: float
    cor3: float | None
    cor4: float | None
    cor5: float | None
    turbulent: bool


@dataclass
class FamilyResult:
    """Tally of one bound family's checks; max_excess is the worst
    (value - bound), negative meaning margin."""

    name: str
    checked: int = 0
    passed: int = 0
    max_excess: float = field(default=-math.inf)

    def record(self, value: float, bound: float, slack: float = INEQ_SLACK) -> bool:
        value, bound = float(value), float(bound)
        ok = value <= bound + slack
        self.checked += 1
        self.passed += int(ok)
        self.max_excess = max(self.max_excess, value - bound)
        return ok

    @property
    def failed(self) -> int:
        return self.checked - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class BoundReport:
    """Full comparison of an interpolant against the fine-grid oracle."""

    rows: list[BoundRow]
    families: dict[str, FamilyResult]
    eps_ctx: EpsilonContext
    turbulent_intervals: list[int]
    limit_case_intervals: list[int]
    uncovered_intervals: tuple[int, int]
    max_err: float
    max_tightness: float
    update_count_coarse: int
    update_count_fine: int
    cost_ratio: float
    h: float
    r: int
    n_coarse_steps: int
    n_fine_steps: int
    cfl_coarse: CflReport | None = None
    cfl_fine: CflReport | None = None

    def all_ok(self, enabled: dict[str, bool] | None = None) -> bool:
        """True when every enabled family has no failed checks."""
        for name, fam in self.families.items():
            if enabled is not None and not enabled.get(name, True):
                continue
            if not fam.ok:
                return False
        return True


def _require(condition: bool, relation: str) -> None:
    if not condition:
        raise ValueError(f"coarse/fine runs are not comparable: {relation}")


def compare(
    coarse: Solution,
    fine: Solution,
    interp: InterpolantSolution,
    ctx: EpsilonContext,
    model=None,
    u0_sup: float | None = None,
) -> BoundReport:
    """Measure |v_m - u_m| on every interior subnode and check every bound.

    ``fine`` must be the r-fold refinement companion of ``coarse``: same
    domain, k = h/r, M = N*r fine steps of length dt/r. Passing the flux
    model enables the CFL reports and, for an admissible linear model, the
    uniform bound and the norm-growth check. ``u0_sup`` defaults to the max
    absolute coarse initial value.
    """
    N = coarse.n_steps
    M = fine.n_steps
    P = coarse.grid.P
    _require(
        abs(fine.grid.a - coarse.grid.a) <= NODE_ATOL and abs(fine.grid.b - coarse.grid.b) <= NODE_ATOL,
        f"grids cover different domains: [{coarse.grid.a}, {coarse.grid.b}] vs "
        f"[{fine.grid.a}, {fine.grid.b}]",
    )
    _require(fine.grid.P % P == 0, f"fine P={fine.grid.P} is not a multiple of coarse P={P}")
    r = fine.grid.P // P
    _require(r >= 2 and r % 2 == 0, f"refinement factor r={r} is not an even integer >= 2")
    _require(
        abs(fine.grid.h * r - coarse.grid.h) <= NODE_ATOL * max(1.0, coarse.grid.h),
        f"fine step k={fine.grid.h} != h/r={coarse.grid.h / r}",
    )
    _require(M == N * r, f"fine step count M={M} != N*r={N * r}")
    _require(
        abs(fine.dt * r - coarse.dt) <= NODE_ATOL * max(1.0, coarse.dt),
        f"fine dt*r={fine.dt * r} != coarse dt={coarse.dt}",
    )
    _require(ctx.M == M, f"epsilon context M={ctx.M} != fine step count M={M}")
    _require(
        len(interp.pieces) == P - 2,
        f"interpolant has {len(interp.pieces)} pieces, expected P-2={P - 2}",
    )

    h = coarse.grid.h
    eps = ctx.eps
    w_final = coarse.values[N]
    u_final = fine.values[M]
    w0 = coarse.values[0]
    turbulent = detect_turbulence(w_final)
    turbulent_set = set(turbulent)
    limit_case = [p.j for p in interp.pieces if p.d1 == 0.0 and p.d2 == 0.0]
    limit_set = set(limit_case)

    families = {name: FamilyResult(name) for name in FAMILY_NAMES}

    linear_admissible = False
    cor4_val = None
    cfl_c = cfl_f = None
    if model is not None:
        cfl_c = cfl_report(coarse, model)
        cfl_f = cfl_report(fine, model)
        if model.name == "linear":
            a_speed = model.params["a"]
            stab = linear_stability_params(a_speed, h, N, coarse.dt)
            linear_admissible = stab.admissible
            if linear_admissible:
                sup = float(np.max(np.abs(w0))) if u0_sup is None else float(u0_sup)
                cor4_val = corollary4_bound(
                    h, coarse.grid.a, coarse.grid.b, N, coarse.dt, sup, eps
                )

    cor5_val = corollary5_bound(h, eps)
    rows: list[BoundRow] = []
    max_err = 0.0
    max_tightness = 0.0

    for piece in interp.pieces:
        v = sample(piece, r)
        base = piece.j * r
        u_piece = u_final[base : base + r + 1]
        d1, d2 = piece.d1, piece.d2
        is_turbulent = piece.j in turbulent_set
        is_limit = piece.j in limit_set

        families["cor2"].record(abs(d1 - d2), eps, slack=ADJACENT_SLACK)
        families["prop7_8"].record(abs(v[0] - u_piece[0]), eps)
        families["prop7_8"].record(abs(v[r] - u_piece[r]), eps)

        for m in range(r + 1):
            v_m = float(v[m])
            u_m = float(u_piece[m])
            abs_err = abs(v_m - u_m)
            thm1 = _theorem1_value(h, d1, d2, m, r, eps)
            if 1 <= m <= r:
                families["theorem1"].record(abs_err, thm1)
                if m <= r // 2:
                    families["prop9_10"].record(abs(u_piece[0] - u_m), m * eps)
                if m >= r // 2:
                    families["prop9_10"].record(abs(u_m - u_piece[r]), (r - m) * eps)
                cor3 = None
                if ctx.max_initial_diff <= corollary3_delta(eps, m, r, M):
                    cor3 = 1.5 * h + 0.75 * abs(d1 + d2) + eps
            else:
                cor3 = None
            cor4 = cor4_val
            if cor4 is not None:
                families["cor4"].record(abs_err, cor4)
            cor5 = cor5_val if is_turbulent else None
            if cor5 is not None:
                families["cor5"].record(abs_err, cor5)
            if is_limit:
                families["limit_case"].record(abs_err, 1.5 * h + eps)
            max_err = max(max_err, abs_err)
            max_tightness = max(max_tightness, abs_err / thm1)
            rows.append(
                BoundRow(
                    j=piece.j,
                    m=m,
                    x=float(fine.grid.nodes[base + m]),
                    t_m=m / r,
                    v_m=v_m,
                    u_m=u_m,
                    abs_err=abs_err,
                    thm1=thm1,
                    cor3=cor3,
                    cor4=cor4,
                    cor5=cor5,
                    turbulent=is_turbulent,
                )
            )

    # trajectory-wise decay of adjacent differences and per-step increments
    fine_diffs = np.max(np.abs(np.diff(fine.values, axis=1)), axis=1)
    fine_incr = np.max(np.abs(np.diff(fine.values, axis=0)), axis=1)
    for n in range(1, M + 1):
        families["prop4"].record(float(fine_diffs[n]), eps / _pow3(M - n))
    for n in range(M):
        families["prop5"].record(float(fine_incr[n]), eps / _pow3(M - n))
    families["prop6"].record(float(np.max(np.abs(np.diff(w0)))), eps / _pow3(N))

    if linear_admissible:
        norm0 = discrete_norm2(w0, h)
        for n in range(N + 1):
            families["stability"].record(
                discrete_norm2(coarse.values[n], h),
                math.exp(n * coarse.dt / 2.0) * norm0,
            )

    return BoundReport(
        rows=rows,
        families=families,
        eps_ctx=ctx,
        turbulent_intervals=turbulent,
        limit_case_intervals=limit_case,
        uncovered_intervals=(0, P - 1),
        max_err=max_err,
        max_tightness=max_tightness,
        update_count_coarse=coarse.update_count,
        update_count_fine=fine.update_count,
        cost_ratio=fine.update_count / coarse.update_count,
        h=h,
        r=r,
        n_coarse_steps=N,
        n_fine_steps=M,
        cfl_coarse=cfl_c,
        cfl_fine=cfl_f,
    )
