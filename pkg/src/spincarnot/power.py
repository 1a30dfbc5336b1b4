"""Power maximization over the two isothermal durations.

The inner variational problem leaves one constant per branch (K_H, K_C);
durations and heats are quadratures of those constants, so the outer
optimization runs directly over (K_H, K_C) and recovers the durations
afterwards.  Since the rate constant G enters only through the product
G * t, the whole search is carried out in scaled time: the optimal K pair,
the efficiency at maximum power, and all heat values are exactly
independent of G, while the optimal durations scale as 1/G.

The search itself is deterministic and derivative-free: coordinate-wise
golden-section passes seeded from the closed-form low-dissipation optimum
(with coefficients roughly fitted on a coarse duration grid), finished by a
Nelder-Mead polish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .baths import (
    Bath,
    EmpBounds,
    LowDissipationCoefficients,
    LowDissipationOptimum,
    emp_bounds,
    generalized_carnot,
    low_dissipation_optimum,
)
from .engine import CycleBoundaries, EngineParams, cycle_boundaries
from .errors import DomainError, NumericalError, SpinCarnotError
from .protocol import (
    BranchKind,
    K_EDGE_MARGIN,
    _branch_heat,
    _scaled_branch_duration,
    _solve_k_scaled,
    branch_endpoints,
)

__all__ = [
    "OptimumReport",
    "SweepRow",
    "power_at",
    "maximize_power",
    "emp_vs_carnot_sweep",
    "fit_low_dissipation",
    "low_dissipation_prediction",
]

# scaled-duration (G * t) grids: coarse one to seed the optimizer, finer
# geometric one for the low-dissipation fit attached to every report
_SEED_GRID = np.geomspace(2.0, 63.0, 4)
_FIT_GRID = np.geomspace(5.0, 500.0, 8)
# solved |K| must stay this far below |p1| for a fit to count as low-dissipation
_FIT_K_FRACTION = 0.1
# outer-loop convergence: relative change of specific power between passes
_POWER_RTOL = 1e-13
_GOLDEN_TOL = 1e-11


@dataclass(frozen=True)
class OptimumReport:
    """Maximum-power operating point with all diagnostics."""

    t_hot_star: float
    t_cold_star: float
    k_hot: float
    k_cold: float
    q_hot: float
    q_cold: float
    power_star: float
    emp: float
    eta_s: float
    eta_c: float
    bounds: EmpBounds
    k_ratio: float
    duration_ratio: float
    q1_hot_fit: float
    q1_cold_fit: float
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        """Flat mapping suitable for JSON output."""
        return {
            "t_hot_star": self.t_hot_star,
            "t_cold_star": self.t_cold_star,
            "k_hot": self.k_hot,
            "k_cold": self.k_cold,
            "q_hot": self.q_hot,
            "q_cold": self.q_cold,
            "power_star": self.power_star,
            "emp": self.emp,
            "eta_s": self.eta_s,
            "eta_c": self.eta_c,
            "eta_min": self.bounds.eta_min,
            "eta_max": self.bounds.eta_max,
            "eta_gca": self.bounds.eta_gca,
            "k_ratio": self.k_ratio,
            "duration_ratio": self.duration_ratio,
            "q1_hot_fit": self.q1_hot_fit,
            "q1_cold_fit": self.q1_cold_fit,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class SweepRow:
    """One point of an EMP-versus-Carnot-limit sweep."""

    t_cold: float
    report: OptimumReport | None
    error: str | None = None


class _BranchObjective:
    """Caches (scaled duration, heat) per log|K| for one branch."""

    def __init__(self, boundaries: CycleBoundaries, branch: BranchKind, t_eff: float):
        self.p_start, self.p_end = branch_endpoints(branch, boundaries)
        self.sign = branch.sign
        self.t_eff = t_eff
        self._cache: dict[float, tuple[float, float]] = {}

    def __call__(self, log_mag: float) -> tuple[float, float]:
        hit = self._cache.get(log_mag)
        if hit is None:
            k = -math.exp(log_mag)
            hit = (
                _scaled_branch_duration(k, self.p_start, self.p_end, self.sign),
                _branch_heat(k, self.p_start, self.p_end, self.sign, self.t_eff),
            )
            self._cache[log_mag] = hit
        return hit

    def solve(self, scaled_duration: float) -> float:
        return _solve_k_scaled(scaled_duration, self.p_start, self.p_end, self.sign)


def _golden_min(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section minimum of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def _bracket_minimum(f, x0: float, step: float, lo_cap: float, hi_cap: float):
    """Expand around x0 until a descent triple is bracketed, within caps."""
    a = max(x0 - step, lo_cap)
    b = min(max(x0, lo_cap), hi_cap)
    c = min(x0 + step, hi_cap)
    fa, fb, fc = f(a), f(b), f(c)
    for _ in range(80):
        if fb <= fa and fb <= fc:
            return a, c
        if fa < fc:  # walk left
            if a <= lo_cap:
                return a, c
            a, b, c, fb, fc = max(a - (c - a), lo_cap), a, b, fa, fb
            fa = f(a)
        else:  # walk right
            if c >= hi_cap:
                return a, c
            a, b, c, fa, fb = b, c, min(c + (c - a), hi_cap), fb, fc
            fc = f(c)
    raise NumericalError(
        "failed to bracket a power maximum along one K coordinate",
        diagnostics={"x0": x0, "last_triple": (a, b, c)},
    )


def _seed_from_rough_fit(
    hot: _BranchObjective, cold: _BranchObjective, drive: float, mag_top: float
) -> tuple[float, float]:
    """Scaled optimal durations predicted by a coarse low-dissipation fit."""
    try:
        design = np.column_stack([np.ones_like(_SEED_GRID), 1.0 / _SEED_GRID])
        heats_h = [hot(math.log(-hot.solve(s))) [1] for s in _SEED_GRID]
        heats_c = [cold(math.log(-cold.solve(s)))[1] for s in _SEED_GRID]
        (_, q1h), *_ = np.linalg.lstsq(design, np.array(heats_h), rcond=None)
        (_, q1c), *_ = np.linalg.lstsq(design, np.array(heats_c), rcond=None)
        a, b = -q1h, -q1c
        if a <= 0.0 or b <= 0.0:
            raise NumericalError("rough fit produced non-negative q1")
        root_sum = math.sqrt(a) + math.sqrt(b)
        return (
            2.0 * math.sqrt(a) * root_sum / drive,
            2.0 * math.sqrt(b) * root_sum / drive,
        )
    except SpinCarnotError:
        # conservative fallback: a mid-bracket K on both branches
        fallback = 0.05 * mag_top
        return (
            _scaled_branch_duration(-fallback, hot.p_start, hot.p_end, hot.sign),
            _scaled_branch_duration(-fallback, cold.p_start, cold.p_end, cold.sign),
        )


def power_at(t_hot: float, t_cold: float, params: EngineParams) -> float:
    """Power of the optimally driven cycle at fixed isothermal durations."""
    if not (t_hot > 0.0 and t_cold > 0.0):
        raise DomainError(f"durations must be positive, got ({t_hot}, {t_cold})")
    boundaries = cycle_boundaries(params)
    hot = _BranchObjective(boundaries, BranchKind.HOT_PLUS, params.t_hot_eff)
    cold = _BranchObjective(boundaries, BranchKind.COLD_MINUS, params.t_cold_eff)
    _, q_hot = hot(math.log(-hot.solve(params.gamma * t_hot)))
    _, q_cold = cold(math.log(-cold.solve(params.gamma * t_cold)))
    return (q_hot + q_cold) / (t_hot + t_cold)


def maximize_power(params: EngineParams) -> OptimumReport:
    """Locate the global power maximum over the two isothermal durations."""
    boundaries = cycle_boundaries(params)
    t_hot_eff, t_cold_eff = params.t_hot_eff, params.t_cold_eff
    hot = _BranchObjective(boundaries, BranchKind.HOT_PLUS, t_hot_eff)
    cold = _BranchObjective(boundaries, BranchKind.COLD_MINUS, t_cold_eff)
    drive = (t_hot_eff - t_cold_eff) * boundaries.delta_s
    mag_top = -boundaries.p1

    dur_h, dur_c = _seed_from_rough_fit(hot, cold, drive, mag_top)

    def seed(objective: _BranchObjective, duration: float) -> float:
        try:
            return math.log(-objective.solve(duration))
        except SpinCarnotError:
            # closed-form seed fell outside the feasible range; start mid-bracket
            return math.log(0.05 * mag_top)

    s_hot = seed(hot, dur_h)
    s_cold = seed(cold, dur_c)

    def neg_specific_power(s_h: float, s_c: float) -> float:
        i_h, q_h = hot(s_h)
        i_c, q_c = cold(s_c)
        return -(q_h + q_c) / (i_h + i_c)

    lo_cap = math.log(1e-12 * mag_top)
    hi_cap = math.log(mag_top * (1.0 - K_EDGE_MARGIN))

    best = neg_specific_power(s_hot, s_cold)
    for _ in range(12):
        f_h = lambda s: neg_specific_power(s, s_cold)
        a, b = _bracket_minimum(f_h, s_hot, 0.5, lo_cap, hi_cap)
        s_hot = _golden_min(f_h, a, b, _GOLDEN_TOL)
        f_c = lambda s: neg_specific_power(s_hot, s)
        a, b = _bracket_minimum(f_c, s_cold, 0.5, lo_cap, hi_cap)
        s_cold = _golden_min(f_c, a, b, _GOLDEN_TOL)
        value = neg_specific_power(s_hot, s_cold)
        if abs(value - best) <= _POWER_RTOL * abs(best):
            best = value
            break
        best = value

    polish = optimize.minimize(
        lambda sv: neg_specific_power(sv[0], sv[1]),
        np.array([s_hot, s_cold]),
        method="Nelder-Mead",
        options=dict(
            xatol=1e-12, fatol=abs(best) * 1e-14, maxiter=400, maxfev=800
        ),
    )
    if polish.fun <= best:
        s_hot, s_cold = float(polish.x[0]), float(polish.x[1])
        best = float(polish.fun)
    if not np.isfinite(best) or best >= 0.0:
        raise NumericalError(
            "power maximization failed to find a positive-power point",
            diagnostics={"s_hot": s_hot, "s_cold": s_cold, "value": best},
        )

    k_hot, k_cold = -math.exp(s_hot), -math.exp(s_cold)
    i_hot, q_hot = hot(s_hot)
    i_cold, q_cold = cold(s_cold)
    t_hot_star = i_hot / params.gamma
    t_cold_star = i_cold / params.gamma
    power_star = (q_hot + q_cold) / (t_hot_star + t_cold_star)
    emp = (q_hot + q_cold) / q_hot
    eta_s = generalized_carnot(params.hot, params.cold)
    bounds = emp_bounds(eta_s)

    fit_durations = _FIT_GRID / params.gamma
    q1_hot = fit_low_dissipation(params, BranchKind.HOT_PLUS, fit_durations)[1]
    q1_cold = fit_low_dissipation(params, BranchKind.COLD_MINUS, fit_durations)[1]

    return OptimumReport(
        t_hot_star=t_hot_star,
        t_cold_star=t_cold_star,
        k_hot=k_hot,
        k_cold=k_cold,
        q_hot=q_hot,
        q_cold=q_cold,
        power_star=power_star,
        emp=emp,
        eta_s=eta_s,
        eta_c=1.0 - params.cold.temperature / params.hot.temperature,
        bounds=bounds,
        k_ratio=k_hot / k_cold,
        duration_ratio=t_hot_star / t_cold_star,
        q1_hot_fit=q1_hot,
        q1_cold_fit=q1_cold,
        warnings=params.metadata_warnings(),
    )


def _sweep_point(params_template: EngineParams, t_cold: float) -> SweepRow:
    try:
        point = replace(
            params_template,
            cold=Bath(float(t_cold), params_template.cold.tuning),
        )
        return SweepRow(t_cold=float(t_cold), report=maximize_power(point))
    except SpinCarnotError as exc:
        return SweepRow(t_cold=float(t_cold), report=None, error=str(exc))


def emp_vs_carnot_sweep(
    params_template: EngineParams, t_cold_values, jobs: int = 1
) -> list[SweepRow]:
    """One maximum-power optimization per cold-bath temperature.

    Failed points are recorded with their error message and the sweep
    continues.  Rows come back ordered by increasing Carnot limit, i.e.
    decreasing cold temperature, regardless of worker completion order.
    """
    values = sorted(float(t) for t in t_cold_values)
    values.reverse()
    if jobs > 1 and len(values) > 1:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(partial(_sweep_point, params_template), values))
    return [_sweep_point(params_template, t) for t in values]


def fit_low_dissipation(
    params: EngineParams, branch: BranchKind, durations
) -> tuple[float, float]:
    """Least-squares fit of Q(t) = q0 + q1/t on one branch.

    All durations must sit in the low-dissipation regime (solved |K| well
    inside the bracket); q0 then reproduces +/- T^e dS and q1 is negative.
    """
    durations = np.asarray(durations, dtype=float)
    if durations.size < 4:
        raise DomainError(f"need at least 4 durations, got {durations.size}")
    if np.any(durations <= 0.0):
        raise DomainError("durations must be positive")
    boundaries = cycle_boundaries(params)
    t_eff = params.t_hot_eff if branch is BranchKind.HOT_PLUS else params.t_cold_eff
    objective = _BranchObjective(boundaries, branch, t_eff)
    k_limit = _FIT_K_FRACTION * -boundaries.p1

    heats = np.empty_like(durations)
    for i, t in enumerate(durations):
        k = objective.solve(params.gamma * t)
        if -k > k_limit:
            raise DomainError(
                f"duration {t:g} leaves the low-dissipation regime "
                f"(|K| = {-k:g} > {k_limit:g})"
            )
        heats[i] = objective(math.log(-k))[1]

    design = np.column_stack([np.ones_like(durations), 1.0 / durations])
    cond = np.linalg.cond(design)
    if cond > 1e10:
        raise NumericalError(
            f"fit design matrix ill-conditioned (cond = {cond:g}); "
            "spread the durations further",
            diagnostics={"durations": durations},
        )
    coeffs, *_ = np.linalg.lstsq(design, heats, rcond=None)
    residuals = heats - design @ coeffs
    rms = float(np.sqrt(np.mean(residuals**2)))
    scale = float(np.max(np.abs(heats)))
    if not np.all(np.isfinite(coeffs)) or rms > 0.05 * scale:
        raise NumericalError(
            "low-dissipation fit did not describe the data",
            diagnostics={"coeffs": coeffs, "rms_residual": rms, "heats": heats},
        )
    return float(coeffs[0]), float(coeffs[1])


def low_dissipation_prediction(params: EngineParams) -> LowDissipationOptimum:
    """Closed-form optimum implied by the fitted first-order coefficients."""
    fit_durations = _FIT_GRID / params.gamma
    q0h, q1h = fit_low_dissipation(params, BranchKind.HOT_PLUS, fit_durations)
    _, q1c = fit_low_dissipation(params, BranchKind.COLD_MINUS, fit_durations)
    delta_s = q0h / params.t_hot_eff
    coeffs = LowDissipationCoefficients(q1_hot=q1h, q1_cold=q1c, delta_s=delta_s)
    return low_dissipation_optimum(coeffs, params.hot, params.cold)
