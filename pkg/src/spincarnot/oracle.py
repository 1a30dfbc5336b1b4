"""Independent verification by direct time integration of the dynamics.

Everything here deliberately avoids the branch quadratures: a reconstructed
protocol is treated as plain data (gap versus time, linear between samples),
the population is advanced with a classic fixed-step fourth-order integrator
refined until the accumulated heat is step-insensitive, and work/heat books
are kept from their defining rates.  Corner updates (jumps and adiabatic
rescalings) change the gap at frozen population, so they contribute work
only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import EngineParams, cycle_boundaries
from .errors import DomainError, NumericalError
from .protocol import (
    BranchKind,
    ProtocolTrace,
    reconstruct_protocol,
    solve_k_for_duration,
)

__all__ = [
    "MasterIntegration",
    "integrate_master",
    "cycle_energy_audit",
    "quasi_static_audit",
]

# step halving stops once the heat changes by less than this, relatively
_HEAT_REFINE_RTOL = 1e-8
_MAX_REFINEMENTS = 14


@dataclass(frozen=True)
class MasterIntegration:
    """Outcome of one direct integration along a protocol."""

    p_final: float
    heat: float
    work: float
    steps: int


def _rk4_along_trace(
    times: np.ndarray,
    gaps: np.ndarray,
    p_init: float,
    t_eff: float,
    gamma: float,
    n_steps: int,
) -> tuple[float, float, float]:
    """One fixed-step pass; steps are aligned with the trace segments."""
    total = times[-1] - times[0]
    p, heat, work = p_init, 0.0, 0.0
    two_t = 2.0 * t_eff
    tanh = math.tanh

    for i in range(len(times) - 1):
        seg_dt = times[i + 1] - times[i]
        if seg_dt <= 0.0:
            continue
        g0 = gaps[i]
        slope = (gaps[i + 1] - g0) / seg_dt
        m = max(1, round(n_steps * seg_dt / total))
        h = seg_dt / m
        for j in range(m):
            g_now = g0 + slope * (j * h)
            g_mid = g_now + slope * (0.5 * h)
            g_end = g_now + slope * h
            c_now = 1.0 / tanh(g_now / two_t)
            c_mid = 1.0 / tanh(g_mid / two_t)
            c_end = 1.0 / tanh(g_end / two_t)
            # fourth-order step of (p, heat, work)
            k1 = -gamma * p * c_now - gamma
            p2 = p + 0.5 * h * k1
            k2 = -gamma * p2 * c_mid - gamma
            p3 = p + 0.5 * h * k2
            k3 = -gamma * p3 * c_mid - gamma
            p4 = p + h * k3
            k4 = -gamma * p4 * c_end - gamma
            heat += h / 12.0 * (g_now * k1 + 2.0 * g_mid * (k2 + k3) + g_end * k4)
            work += slope * h / 12.0 * (p + 2.0 * p2 + 2.0 * p3 + p4)
            p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return p, heat, work


def integrate_master(
    trace: ProtocolTrace,
    t_eff: float,
    gamma: float,
    step: float,
    p_init: float | None = None,
) -> MasterIntegration:
    """Integrate the population dynamics under a traced protocol.

    ``step`` is the initial step size; it is halved until the accumulated
    heat changes by less than 1e-8 relative, and the refined result is
    returned.  ``p_init`` defaults to the trace's starting population; pass
    the actual state when chaining branches into a cycle.
    """
    times = np.asarray(trace.times, dtype=float)
    gaps = np.asarray(trace.gaps, dtype=float)
    if times.ndim != 1 or times.size < 2 or np.any(np.diff(times) < 0.0):
        raise DomainError("trace times must be an increasing 1-d array")
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step}")

    total = float(times[-1] - times[0])
    n = max(len(times) - 1, int(math.ceil(total / step)))
    if p_init is None:
        p_init = float(trace.populations[0])

    p, heat, work = _rk4_along_trace(times, gaps, p_init, t_eff, gamma, n)
    for _ in range(_MAX_REFINEMENTS):
        n *= 2
        p2, heat2, work2 = _rk4_along_trace(times, gaps, p_init, t_eff, gamma, n)
        scale = max(abs(heat2), 1e-300)
        converged = abs(heat2 - heat) <= _HEAT_REFINE_RTOL * scale
        p, heat, work = p2, heat2, work2
        if converged:
            return MasterIntegration(p_final=p, heat=heat, work=work, steps=n)
    raise NumericalError(
        "step refinement did not converge the accumulated heat",
        diagnostics={"last_heat": heat, "steps": n},
    )


def cycle_energy_audit(
    params: EngineParams,
    t_hot: float,
    t_cold: float,
    n_samples: int = 1024,
    step: float | None = None,
) -> dict:
    """First-law audit of one full cycle driven by the optimal protocols.

    Assembles hot branch, corner updates, and cold branch; integrates both
    isothermal branches directly; and closes the books:
    net output work must equal Q_hot + Q_cold and the first-law residual
    dE - (W + Q) must vanish.
    """
    boundaries = cycle_boundaries(params)
    the, tce = params.t_hot_eff, params.t_cold_eff
    hot_el = solve_k_for_duration(
        t_hot, BranchKind.HOT_PLUS, boundaries, params.gamma, the
    )
    cold_el = solve_k_for_duration(
        t_cold, BranchKind.COLD_MINUS, boundaries, params.gamma, tce
    )
    hot_trace = reconstruct_protocol(hot_el, params.gamma, n_samples)
    cold_trace = reconstruct_protocol(cold_el, params.gamma, n_samples)
    if step is None:
        step = min(t_hot, t_cold) / 4096.0

    hot_run = integrate_master(hot_trace, the, params.gamma, step)
    # continue from the actual state so the cycle books close exactly
    cold_run = integrate_master(
        cold_trace, tce, params.gamma, step, p_init=hot_run.p_final
    )

    # corner bookkeeping: gap changes at frozen population are work only
    p_a = boundaries.p0
    p_b = hot_run.p_final
    p_back = cold_run.p_final
    w_jump_in_hot = (hot_trace.gaps[0] - params.delta_a) * p_a / 2.0
    w_jump_out_hot = (params.delta_b - hot_trace.gaps[-1]) * p_b / 2.0
    w_adiabat_bc = (boundaries.delta_c - params.delta_b) * p_b / 2.0
    w_jump_in_cold = (cold_trace.gaps[0] - boundaries.delta_c) * p_b / 2.0
    w_jump_out_cold = (boundaries.delta_d - cold_trace.gaps[-1]) * p_back / 2.0
    w_adiabat_da = (params.delta_a - boundaries.delta_d) * p_back / 2.0

    work_total = (
        w_jump_in_hot
        + hot_run.work
        + w_jump_out_hot
        + w_adiabat_bc
        + w_jump_in_cold
        + cold_run.work
        + w_jump_out_cold
        + w_adiabat_da
    )
    heat_total = hot_run.heat + cold_run.heat
    energy_change = params.delta_a * (p_back - p_a) / 2.0
    energy_residual = energy_change - (work_total + heat_total)

    return {
        "t_hot": t_hot,
        "t_cold": t_cold,
        "q_hot_integrated": hot_run.heat,
        "q_cold_integrated": cold_run.heat,
        "work_total": work_total,
        "net_work_output": -work_total,
        "population_start": p_a,
        "population_after_hot": p_b,
        "population_closure": p_back - p_a,
        "energy_change": energy_change,
        "energy_residual": energy_residual,
        "steps_hot": hot_run.steps,
        "steps_cold": cold_run.steps,
    }


def quasi_static_audit(params: EngineParams, duration_grid) -> dict:
    """Report how the engine approaches its quasi-static limit.

    For equal branch durations drawn from the grid (spanning at least two
    decades), records heats, efficiency, and power, and checks that the
    efficiency climbs monotonically to the generalized Carnot limit, that
    power decays, that fitted first-order heat corrections are negative,
    and that the fit residuals shrink at least as fast as 1/t^2.
    Report-only: nothing here raises on a failed check.
    """
    grid = np.sort(np.asarray(duration_grid, dtype=float))
    if grid.size < 4:
        raise DomainError("duration grid needs at least 4 points")
    if grid[0] <= 0.0:
        raise DomainError("durations must be positive")
    if grid[-1] / grid[0] < 100.0:
        raise DomainError("duration grid must span at least two decades")

    from .power import _BranchObjective  # local import to avoid a cycle

    boundaries = cycle_boundaries(params)
    the, tce = params.t_hot_eff, params.t_cold_eff
    hot = _BranchObjective(boundaries, BranchKind.HOT_PLUS, the)
    cold = _BranchObjective(boundaries, BranchKind.COLD_MINUS, tce)
    eta_s = 1.0 - tce / the

    q_hots, q_colds, etas, powers = [], [], [], []
    for t in grid:
        q_h = hot(math.log(-hot.solve(params.gamma * t)))[1]
        q_c = cold(math.log(-cold.solve(params.gamma * t)))[1]
        q_hots.append(q_h)
        q_colds.append(q_c)
        etas.append((q_h + q_c) / q_h)
        powers.append((q_h + q_c) / (2.0 * t))
    q_hots, q_colds = np.array(q_hots), np.array(q_colds)
    etas, powers = np.array(etas), np.array(powers)

    q0_limit = the * boundaries.delta_s

    def fit_and_residual_slope(heats):
        top = grid.size // 2
        design = np.column_stack([np.ones(grid.size - top), 1.0 / grid[top:]])
        coeffs, *_ = np.linalg.lstsq(design, heats[top:], rcond=None)
        resid = np.abs(heats[:top] - (coeffs[0] + coeffs[1] / grid[:top]))
        good = resid > 0.0
        if np.count_nonzero(good) >= 2:
            slope = np.polyfit(np.log(grid[:top][good]), np.log(resid[good]), 1)[0]
        else:
            slope = -math.inf
        return float(coeffs[0]), float(coeffs[1]), float(slope)

    q0_h, q1_h, slope_h = fit_and_residual_slope(q_hots)
    q0_c, q1_c, slope_c = fit_and_residual_slope(q_colds)

    return {
        "durations": grid.tolist(),
        "q_hot": q_hots.tolist(),
        "q_cold": q_colds.tolist(),
        "efficiency": etas.tolist(),
        "power": powers.tolist(),
        "eta_s": eta_s,
        "q_hot_quasistatic": q0_limit,
        "q_hot_limit_gap": float(abs(q_hots[-1] - q0_limit) / q0_limit),
        "eta_limit_gap": float(abs(etas[-1] - eta_s)),
        "eta_monotone_increasing": bool(np.all(np.diff(etas) > 0.0)),
        "power_monotone_decreasing": bool(np.all(np.diff(powers) < 0.0)),
        "fit": {
            "q0_hot": q0_h,
            "q1_hot": q1_h,
            "q0_cold": q0_c,
            "q1_cold": q1_c,
            "residual_slope_hot": slope_h,
            "residual_slope_cold": slope_c,
        },
        "q1_negative_both": bool(q1_h < 0.0 and q1_c < 0.0),
        "residuals_shrink_fast": bool(slope_h <= -1.8 and slope_c <= -1.8),
    }
