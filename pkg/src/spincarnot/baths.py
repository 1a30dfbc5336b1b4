"""Closed-form thermodynamics of temperature-tunable baths.

A tunable bath presents the effective temperature T^e = T (1 + 2 sinh^2 r),
where T is the thermodynamic temperature and r the tuning (squeezing)
parameter.  Everything here is exact algebra: the quasi-static efficiency
limit between two such baths, the bounds on the efficiency at maximum power
(EMP) of a low-dissipation engine running between them, the generalized
Curzon-Ahlborn efficiency, and the closed-form optimum of the generic
low-dissipation power expression

    P(t_H, t_C) = [(T_H^e - T_C^e) dS - a/t_H - b/t_C] / (t_H + t_C),

with a = -Q1_hot > 0 and b = -Q1_cold > 0 the first-order dissipation
coefficients.  Units: hbar = k_B = 1, energies and temperatures in meV,
times in 1/meV.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonEngineError

__all__ = [
    "Bath",
    "EmpBounds",
    "LowDissipationCoefficients",
    "LowDissipationOptimum",
    "effective_temperature",
    "generalized_carnot",
    "emp_bounds",
    "gca_efficiency",
    "low_dissipation_optimum",
]


@dataclass(frozen=True)
class Bath:
    """A heat reservoir with thermodynamic temperature and tuning parameter."""

    temperature: float
    tuning: float = 0.0

    def __post_init__(self):
        if not self.temperature > 0.0:
            raise DomainError(f"bath temperature must be positive, got {self.temperature}")
        if self.tuning < 0.0:
            raise DomainError(f"bath tuning must be non-negative, got {self.tuning}")


@dataclass(frozen=True)
class EmpBounds:
    """EMP bounds and reference efficiencies derived from one quasi-static limit.

    eta_min = eta_s/2 and eta_max = eta_s/(2 - eta_s) bound the EMP of any
    low-dissipation engine with quasi-static efficiency eta_s; eta_gca is the
    generalized Curzon-Ahlborn value 1 - sqrt(1 - eta_s), which always lies
    between them.
    """

    eta_s: float
    eta_min: float
    eta_max: float
    eta_gca: float

    def contains(self, eta: float, slack: float = 0.0) -> bool:
        return self.eta_min - slack <= eta <= self.eta_max + slack


@dataclass(frozen=True)
class LowDissipationCoefficients:
    """First-order heat corrections Q = Q0 + Q1/t and the entropy change."""

    q1_hot: float
    q1_cold: float
    delta_s: float

    def __post_init__(self):
        if not self.q1_hot < 0.0:
            raise DomainError(f"q1_hot must be negative, got {self.q1_hot}")
        if not self.q1_cold < 0.0:
            raise DomainError(f"q1_cold must be negative, got {self.q1_cold}")
        if not self.delta_s > 0.0:
            raise DomainError(f"delta_s must be positive, got {self.delta_s}")


@dataclass(frozen=True)
class LowDissipationOptimum:
    """Maximum-power operating point of the generic low-dissipation engine."""

    t_hot: float
    t_cold: float
    power: float
    emp: float


def effective_temperature(bath: Bath) -> float:
    """Effective temperature T (1 + 2 sinh^2 r) presented by a tunable bath."""
    return bath.temperature * (1.0 + 2.0 * math.sinh(bath.tuning) ** 2)


def generalized_carnot(hot: Bath, cold: Bath) -> float:
    """Quasi-static efficiency limit 1 - T_C^e / T_H^e.

    Raises NonEngineError unless the hot effective temperature strictly
    exceeds the cold one.
    """
    t_hot = effective_temperature(hot)
    t_cold = effective_temperature(cold)
    if not t_hot > t_cold:
        raise NonEngineError(
            f"cold effective temperature {t_cold:g} must be below hot {t_hot:g}"
        )
    return 1.0 - t_cold / t_hot


def emp_bounds(eta_s: float) -> EmpBounds:
    """Bounds eta_s/2 <= EMP <= eta_s/(2 - eta_s) plus the gCA reference."""
    if not 0.0 <= eta_s < 1.0:
        raise DomainError(f"eta_s must lie in [0, 1), got {eta_s}")
    return EmpBounds(
        eta_s=eta_s,
        eta_min=eta_s / 2.0,
        eta_max=eta_s / (2.0 - eta_s),
        eta_gca=gca_efficiency(eta_s),
    )


def gca_efficiency(eta_s: float) -> float:
    """Generalized Curzon-Ahlborn efficiency 1 - sqrt(1 - eta_s)."""
    if not 0.0 <= eta_s < 1.0:
        raise DomainError(f"eta_s must lie in [0, 1), got {eta_s}")
    return 1.0 - math.sqrt(1.0 - eta_s)


def low_dissipation_optimum(
    coeffs: LowDissipationCoefficients, hot: Bath, cold: Bath
) -> LowDissipationOptimum:
    """Closed-form maximum of the low-dissipation power expression.

    Stationarity of P gives a/t_H^2 = b/t_C^2, from which

        t_H* = 2 sqrt(a) (sqrt(a) + sqrt(b)) / A,
        t_C* = 2 sqrt(b) (sqrt(a) + sqrt(b)) / A,
        P*   = A^2 / (4 (sqrt(a) + sqrt(b))^2),

    with A = (T_H^e - T_C^e) dS.  The EMP evaluated at these durations always
    lies inside the emp_bounds interval.
    """
    t_hot_eff = effective_temperature(hot)
    t_cold_eff = effective_temperature(cold)
    a = -coeffs.q1_hot
    b = -coeffs.q1_cold
    drive = (t_hot_eff - t_cold_eff) * coeffs.delta_s
    if not drive > 0.0:
        raise DomainError(
            f"no positive-power regime: (T_H^e - T_C^e) dS = {drive:g} <= 0"
        )
    root_sum = math.sqrt(a) + math.sqrt(b)
    t_hot = 2.0 * math.sqrt(a) * root_sum / drive
    t_cold = 2.0 * math.sqrt(b) * root_sum / drive
    power = drive * drive / (4.0 * root_sum * root_sum)
    q_hot = t_hot_eff * coeffs.delta_s - a / t_hot
    q_cold = -t_cold_eff * coeffs.delta_s - b / t_cold
    return LowDissipationOptimum(
        t_hot=t_hot, t_cold=t_cold, power=power, emp=(q_hot + q_cold) / q_hot
    )
