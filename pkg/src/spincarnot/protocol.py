"""Optimal isothermal branches of the finite-time cycle.

Maximizing the heat absorbed in a fixed-duration isothermal branch over all
driving protocols reduces to a first integral of the variational problem:
along the optimal population path,

    El(p, v) = v^2 p / ((1 + v)^2 - p^2) = K,    v = (dp/dt) / G,

for a negative constant K that measures the distance from the quasi-static
limit (K -> 0-).  Solving for v gives two branch rates

    v = [-K +/- sqrt(K p (K p + 1 - p^2))] / (K - p),

the positive one for the heat-absorbing (hot) branch and the negative one
for the heat-releasing (cold) branch.  K is pinned by the branch duration
through a quadrature of dp / v, the absorbed heat follows from a second
quadrature, and the time-domain protocol is recovered through the gap
functional, exhibiting the characteristic endpoint jumps of optimal
finite-time driving.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, optimize

from .engine import CycleBoundaries
from .errors import (
    DomainError,
    InfeasibleDurationError,
    InvalidStateError,
    NumericalError,
)

__all__ = [
    "BranchKind",
    "ELBranch",
    "ProtocolTrace",
    "branch_endpoints",
    "pdot_branch",
    "el_constant",
    "duration_integral",
    "solve_k_for_duration",
    "heat_quadrature",
    "reconstruct_protocol",
    "population_from_gap",
]

# K root finding: keep-out margin around the singular endpoint K = p1 and
# around K = 0, both relative to |p1|
K_EDGE_MARGIN = 1e-3
# absolute floor on |K| when expanding the bracket toward the quasi-static end
_K_FLOOR = 1e-30
# quadrature tolerances used for every p-integral in this module
_QUAD_EPSABS = 1e-13
_QUAD_EPSREL = 1e-11
# relative accuracy demanded of a solved duration
_DURATION_RTOL = 1e-10


class BranchKind(Enum):
    """Isothermal branch label; the value is the sign of the population rate."""

    HOT_PLUS = 1
    COLD_MINUS = -1

    @property
    def sign(self) -> int:
        return self.value


@dataclass(frozen=True)
class ELBranch:
    """One optimal isothermal branch: constant K plus its boundary data."""

    k: float
    branch: BranchKind
    t_eff: float
    p_start: float
    p_end: float

    def __post_init__(self):
        if not self.k < 0.0:
            raise DomainError(f"K must be negative, got {self.k}")
        p_top = max(self.p_start, self.p_end)
        if not self.k > p_top:
            raise DomainError(
                f"K = {self.k:g} must exceed the least-negative path "
                f"population {p_top:g}"
            )
        if not (-1.0 < self.p_start < 0.0 and -1.0 < self.p_end < 0.0):
            raise DomainError(
                f"path populations must lie in (-1, 0), got "
                f"({self.p_start}, {self.p_end})"
            )
        expected = 1 if self.p_end > self.p_start else -1
        if expected != self.branch.sign:
            raise DomainError(
                f"{self.branch.name} branch is incompatible with the path "
                f"orientation {self.p_start:g} -> {self.p_end:g}"
            )


@dataclass(frozen=True)
class ProtocolTrace:
    """Reconstructed time-domain protocol of one branch.

    Samples are uniform in population; ``jump_start`` holds (nominal corner
    gap, gap just after t = 0) and ``jump_end`` holds (gap just before the
    end, nominal corner gap).
    """

    times: np.ndarray
    populations: np.ndarray
    gaps: np.ndarray
    jump_start: tuple[float, float]
    jump_end: tuple[float, float]

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    @property
    def samples(self):
        """Iterate over (t, p, gap) triples."""
        return zip(self.times.tolist(), self.populations.tolist(), self.gaps.tolist())


def branch_endpoints(branch: BranchKind, boundaries: CycleBoundaries) -> tuple[float, float]:
    """Oriented (p_start, p_end) pair of a branch: hot rises p0 -> p1."""
    if branch is BranchKind.HOT_PLUS:
        return boundaries.p0, boundaries.p1
    return boundaries.p1, boundaries.p0


def _pdot(p: float, k: float, sign: int) -> float:
    # scalar fast path; assumes a valid bracketed K, so the discriminant
    # K p (K p + 1 - p^2) is positive and K != p
    disc = k * p * (k * p + 1.0 - p * p)
    return (-k + sign * math.sqrt(disc)) / (k - p)


def pdot_branch(p, k, branch: BranchKind):
    """Dimensionless population rate v = (dp/dt)/G on one branch.

    Accepts scalars or arrays.  Raises on the K = p singularity and on a
    negative discriminant (population and K of opposite signs).
    """
    if not np.all(np.asarray(k) < 0.0):
        raise DomainError(f"K must be negative, got {k}")
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr == k):
        raise DomainError(f"K = p = {k} is a singular point of the branch rate")
    disc = k * p_arr * (k * p_arr + 1.0 - p_arr * p_arr)
    if np.any(disc < 0.0):
        raise DomainError(
            "negative discriminant: no real branch rate at this (p, K)"
        )
    out = (-k + branch.sign * np.sqrt(disc)) / (k - p_arr)
    return float(out) if np.isscalar(p) else out


def el_constant(p, pdot_scaled):
    """Conserved combination v^2 p / ((1 + v)^2 - p^2) along an optimal path."""
    v = np.asarray(pdot_scaled, dtype=float)
    p_arr = np.asarray(p, dtype=float)
    out = v * v * p_arr / ((1.0 + v) ** 2 - p_arr * p_arr)
    return float(out) if np.isscalar(p) else out


def _quad(f, a: float, b: float, what: str) -> float:
    value, abserr, info, *rest = integrate.quad(
        f, a, b, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200, full_output=1
    )
    if rest:
        raise NumericalError(
            f"quadrature for {what} did not converge: {rest[0]}",
            diagnostics={"value": value, "abserr": abserr, "interval": (a, b)},
        )
    return value


def _scaled_branch_duration(k: float, p_start: float, p_end: float, sign: int) -> float:
    """G * duration of the branch: integral of dp / v, positive by orientation."""
    return _quad(lambda p: 1.0 / _pdot(p, k, sign), p_start, p_end, "branch duration")


def _branch_heat(k: float, p_start: float, p_end: float, sign: int, t_eff: float) -> float:
    def integrand(p: float) -> float:
        v = _pdot(p, k, sign)
        upper = 1.0 + v - p
        lower = 1.0 + v + p
        if not (upper > 0.0 and lower > 0.0):
            raise InvalidStateError(
                f"heat integrand log arguments ({upper:g}, {lower:g}) "
                f"non-positive at p = {p:g}, K = {k:g}"
            )
        return math.log(upper / lower)

    return t_eff / 2.0 * _quad(integrand, p_start, p_end, "branch heat")


def duration_integral(el: ELBranch, gamma: float) -> float:
    """Branch duration implied by its constant K (positive, decreasing in |K|)."""
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    return (
        _scaled_branch_duration(el.k, el.p_start, el.p_end, el.branch.sign) / gamma
    )


def heat_quadrature(el: ELBranch) -> float:
    """Heat absorbed along the optimal branch; positive on hot, negative on cold."""
    return _branch_heat(el.k, el.p_start, el.p_end, el.branch.sign, el.t_eff)


def _solve_k_scaled(
    scaled_target: float, p_start: float, p_end: float, sign: int
) -> float:
    """Find K < 0 whose scaled branch duration matches ``scaled_target``."""
    p_top = max(p_start, p_end)
    mag_top = -p_top  # |p1|
    log_hi = math.log(mag_top * (1.0 - K_EDGE_MARGIN))  # fastest allowed branch

    def duration_of(log_mag: float) -> float:
        return _scaled_branch_duration(-math.exp(log_mag), p_start, p_end, sign)

    floor_duration = duration_of(log_hi)
    if scaled_target < floor_duration * (1.0 - 1e-12):
        raise InfeasibleDurationError(
            f"scaled duration {scaled_target:g} below the achievable minimum "
            f"{floor_duration:g} for this branch"
        )

    # expand the quasi-static side of the bracket until it overshoots the target
    log_lo = math.log(mag_top * K_EDGE_MARGIN)
    while duration_of(log_lo) < scaled_target:
        log_lo -= math.log(10.0)
        if log_lo < math.log(_K_FLOOR):
            raise NumericalError(
                "could not bracket K for the requested duration",
                diagnostics={"scaled_target": scaled_target},
            )

    def objective(log_mag: float) -> float:
        return duration_of(log_mag) - scaled_target

    f_lo, f_hi = objective(log_lo), objective(log_hi)
    if f_lo >= 0.0 >= f_hi:
        root = optimize.brentq(objective, log_lo, log_hi, xtol=1e-14, rtol=8.9e-16)
    else:
        # monotonicity violated: fall back to a scan plus local refinement
        grid = np.linspace(log_lo, log_hi, 256)
        values = np.array([objective(s) for s in grid])
        flips = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
        if flips.size == 0:
            raise NumericalError(
                "no sign change found while scanning for K",
                diagnostics={"scaled_target": scaled_target, "values": values},
            )
        i = int(flips[0])
        root = optimize.brentq(objective, grid[i], grid[i + 1], xtol=1e-14, rtol=8.9e-16)

    k = -math.exp(root)
    achieved = _scaled_branch_duration(k, p_start, p_end, sign)
    rel_err = abs(achieved - scaled_target) / scaled_target
    if rel_err > _DURATION_RTOL:
        raise NumericalError(
            f"duration solve converged to relative error {rel_err:g} "
            f"(> {_DURATION_RTOL:g})",
            diagnostics={"k": k, "achieved": achieved, "target": scaled_target},
        )
    return k


def solve_k_for_duration(
    target_duration: float,
    branch: BranchKind,
    boundaries: CycleBoundaries,
    gamma: float,
    t_eff: float,
) -> ELBranch:
    """Branch solution whose duration matches the target to 1e-10 relative."""
    if not target_duration > 0.0:
        raise DomainError(f"target duration must be positive, got {target_duration}")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    p_start, p_end = branch_endpoints(branch, boundaries)
    k = _solve_k_scaled(gamma * target_duration, p_start, p_end, branch.sign)
    return ELBranch(k=k, branch=branch, t_eff=t_eff, p_start=p_start, p_end=p_end)


# nodes/weights for the per-segment time accumulation in reconstruct_protocol
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _quasistatic_gap(p: float, t_eff: float) -> float:
    return t_eff * math.log((1.0 - p) / (1.0 + p))


def reconstruct_protocol(el: ELBranch, gamma: float, n_samples: int = 512) -> ProtocolTrace:
    """Time-domain protocol of one branch, sampled uniformly in population.

    Time is accumulated by per-segment quadrature of dp / (G v); the gap at
    each sample comes from inverting the equation of motion at (p, G v),
    and the endpoint jumps compare those gaps with the stationary corner
    values.
    """
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples, got {n_samples}")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")

    sign = el.branch.sign
    ps = np.linspace(el.p_start, el.p_end, n_samples)
    rates = np.array([_pdot(p, el.k, sign) for p in ps])

    # gap from the equation of motion; gamma cancels in the ratio
    uppers = 1.0 + rates - ps
    lowers = 1.0 + rates + ps
    if np.any(uppers <= 0.0) or np.any(lowers <= 0.0):
        raise InvalidStateError("gap recovery hit a non-positive log argument")
    gaps = el.t_eff * np.log(uppers / lowers)
    if not np.all(np.isfinite(gaps)) or np.any(gaps <= 0.0):
        raise NumericalError(
            "reconstructed gap is not positive and finite everywhere",
            diagnostics={"k": el.k},
        )

    times = np.empty(n_samples)
    times[0] = 0.0
    for i in range(n_samples - 1):
        half = (ps[i + 1] - ps[i]) / 2.0
        mid = (ps[i + 1] + ps[i]) / 2.0
        seg = sum(
            w / _pdot(mid + half * x, el.k, sign)
            for x, w in zip(_GAUSS_NODES, _GAUSS_WEIGHTS)
        ) * half
        times[i + 1] = times[i] + seg / gamma

    return ProtocolTrace(
        times=times,
        populations=ps,
        gaps=gaps,
        jump_start=(_quasistatic_gap(el.p_start, el.t_eff), float(gaps[0])),
        jump_end=(float(gaps[-1]), _quasistatic_gap(el.p_end, el.t_eff)),
    )


def population_from_gap(gap: float, t_eff: float, k: float, branch: BranchKind) -> float:
    """Population on an optimal branch at a given instantaneous gap.

    Root of the quadratic [p coth(x) + 1]^2 = K p csch^2(x) with
    x = gap / 2 T^e.  On the hot branch the population lags below the
    instantaneous stationary value; on the cold branch it sits above.
    """
    if not k < 0.0:
        raise DomainError(f"K must be negative, got {k}")
    x = gap / (2.0 * t_eff)
    inner = 1.0 - 4.0 * math.sinh(x) * math.cosh(x) / k
    if inner < 0.0:
        raise DomainError(f"gap {gap:g} unreachable on this branch (K = {k:g})")
    sech2 = 1.0 / math.cosh(x) ** 2
    return -math.tanh(x) + 0.5 * k * sech2 * (1.0 + branch.sign * math.sqrt(inner))
