"""Two-level-spin working medium: dynamics and thermodynamic bookkeeping.

The medium has Hamiltonian H = gap/2 * sigma_z and state p = <sigma_z>.
In contact with a bath of effective temperature T^e it relaxes as

    dp/dt = -G coth(gap / 2 T^e) p - G,

with rate constant G.  Work and heat rates follow the split
dE = dW + dQ of E = gap * p / 2: positive work is done ON the medium,
positive heat is absorbed FROM the bath.

The cycle alternates two finite-time isothermal branches with two
instantaneous gap rescalings that hold the population (and entropy) fixed;
the rescaling ratio T_C^e / T_H^e makes the corner states stationary on
both sides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .baths import Bath, effective_temperature
from .errors import DegenerateCycleError, DomainError, InvalidStateError

__all__ = [
    "EngineParams",
    "CycleBoundaries",
    "stationary_population",
    "master_rhs",
    "gap_from_state",
    "work_rate",
    "heat_rate",
    "entropy",
    "cycle_boundaries",
]

# gap/T^e ratio above which the high-temperature reading of the tunable
# bath becomes questionable; flagged in metadata, never rejected
HIGH_TEMPERATURE_RATIO = 0.1


@dataclass(frozen=True)
class EngineParams:
    """Full specification of the minimal two-level engine.

    delta_a and delta_b are the gap endpoints of the hot isothermal branch
    (delta_a > delta_b > 0 for a positive-area cycle); gamma is the common
    exchange rate constant with both baths.
    """

    hot: Bath
    cold: Bath
    delta_a: float
    delta_b: float
    gamma: float

    def __post_init__(self):
        if self.delta_a == self.delta_b:
            raise DegenerateCycleError(
                f"delta_a == delta_b == {self.delta_a:g}: zero-area cycle"
            )
        if not self.delta_a > self.delta_b > 0.0:
            raise DomainError(
                f"gap endpoints must satisfy delta_a > delta_b > 0, "
                f"got ({self.delta_a}, {self.delta_b})"
            )
        if not self.gamma > 0.0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.t_hot_eff > self.t_cold_eff:
            raise DomainError(
                f"hot effective temperature {self.t_hot_eff:g} must exceed "
                f"cold {self.t_cold_eff:g}"
            )

    @property
    def t_hot_eff(self) -> float:
        return effective_temperature(self.hot)

    @property
    def t_cold_eff(self) -> float:
        return effective_temperature(self.cold)

    def metadata_warnings(self) -> tuple[str, ...]:
        """Non-fatal flags attached to reports produced from these parameters."""
        notes = []
        ratio = self.delta_a / self.t_cold_eff
        if ratio > HIGH_TEMPERATURE_RATIO:
            notes.append(
                f"max gap / min effective temperature = {ratio:.3g} exceeds "
                f"{HIGH_TEMPERATURE_RATIO:g}; outside the high-temperature regime"
            )
        if self.cold.tuning > self.hot.tuning:
            notes.append(
                f"cold tuning {self.cold.tuning:g} exceeds hot tuning "
                f"{self.hot.tuning:g}"
            )
        return tuple(notes)


@dataclass(frozen=True)
class CycleBoundaries:
    """Corner data of the cycle: populations, cold-side gaps, entropy change."""

    p0: float
    p1: float
    delta_c: float
    delta_d: float
    delta_s: float


def stationary_population(gap: float, t_eff: float) -> float:
    """Fixed point -tanh(gap / 2 T^e) of the relaxation dynamics."""
    if gap < 0.0:
        raise DomainError(f"gap must be non-negative, got {gap}")
    if not t_eff > 0.0:
        raise DomainError(f"effective temperature must be positive, got {t_eff}")
    return -math.tanh(gap / (2.0 * t_eff))


def master_rhs(p: float, gap: float, t_eff: float, gamma: float) -> float:
    """Population rate -G coth(gap / 2 T^e) p - G at the current gap."""
    if gap == 0.0:
        if p != 0.0:
            raise DomainError("gap = 0 with nonzero population: coth singularity")
        return -gamma
    return -gamma * p / math.tanh(gap / (2.0 * t_eff)) - gamma


def gap_from_state(p: float, p_rate: float, t_eff: float, gamma: float) -> float:
    """Gap that realizes a given (population, population-rate) pair.

    Inverts the equation of motion:  gap = T^e ln[(G + dp - G p)/(G + dp + G p)].
    Composing with master_rhs is the identity on the gap.
    """
    upper = gamma + p_rate - gamma * p
    lower = gamma + p_rate + gamma * p
    if not (upper > 0.0 and lower > 0.0):
        raise InvalidStateError(
            f"state (p={p:g}, dp/dt={p_rate:g}) unreachable: "
            f"log arguments ({upper:g}, {lower:g}) must both be positive"
        )
    return t_eff * math.log(upper / lower)


def work_rate(gap_rate: float, p: float) -> float:
    """Rate of work done on the medium, (d gap/dt) p / 2."""
    return gap_rate * p / 2.0


def heat_rate(gap: float, p_rate: float) -> float:
    """Rate of heat absorbed from the bath, gap (dp/dt) / 2."""
    return gap * p_rate / 2.0


def entropy(p: float) -> float:
    """Shannon entropy of the two-level populations (1 +/- p)/2, in nats."""
    if abs(p) > 1.0:
        raise DomainError(f"population must lie in [-1, 1], got {p}")
    total = 0.0
    for w in ((1.0 + p) / 2.0, (1.0 - p) / 2.0):
        if w > 0.0:
            total -= w * math.log(w)
    return total


def cycle_boundaries(params: EngineParams) -> CycleBoundaries:
    """Corner populations, cold-side gaps, and entropy change of the cycle.

    The hot-branch corners are stationary at T_H^e; the cold-side gaps are
    the hot ones scaled by T_C^e / T_H^e, which leaves the corner populations
    stationary with the cold bath as well.
    """
    if params.delta_a == params.delta_b:
        raise DegenerateCycleError("delta_a == delta_b: zero entropy change")
    t_hot = params.t_hot_eff
    scale = params.t_cold_eff / t_hot
    p0 = stationary_population(params.delta_a, t_hot)
    p1 = stationary_population(params.delta_b, t_hot)
    return CycleBoundaries(
        p0=p0,
        p1=p1,
        delta_c=params.delta_b * scale,
        delta_d=params.delta_a * scale,
        delta_s=entropy(p1) - entropy(p0),
    )
