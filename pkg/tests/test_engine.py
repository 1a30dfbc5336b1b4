import math

import numpy as np
import pytest

from conftest import make_params
from spincarnot import (
    Bath,
    DegenerateCycleError,
    DomainError,
    EngineParams,
    InvalidStateError,
    cycle_boundaries,
    entropy,
    gap_from_state,
    heat_rate,
    master_rhs,
    stationary_population,
    work_rate,
)

# frozen against a 30-digit mpmath evaluation at T_H^e = 25.8 (1 + 2 sinh^2 2)
THE = 704.552407169225355
P_SS_GAP5 = -0.00354833718865850984
P_SS_GAP3 = -0.00212900803176076418
RHS_REF = -7.72667815239136134e-4  # p = -0.003, gap = 5, Gamma = 0.005
GAP_REF = 4.22732712502716411  # p = -0.003, rate = 0
ENTROPY_HALF = 0.562335144618808350
DELTA_C_REF = 1.00589330659160110  # T_C = 12.9, r_C = 1.8
DELTA_D_REF = 1.67648884431933517
DELTA_S_REF = 4.02902230099612488e-6


class TestStationaryPopulation:
    def test_zero_gap(self):
        assert stationary_population(0.0, 17.0) == 0.0

    def test_frozen_values(self):
        assert stationary_population(5.0, THE) == pytest.approx(P_SS_GAP5, rel=1e-14)
        assert stationary_population(3.0, THE) == pytest.approx(P_SS_GAP3, rel=1e-14)

    def test_range(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            p = stationary_population(rng.uniform(0.0, 50.0), rng.uniform(0.5, 800.0))
            assert -1.0 < p <= 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            stationary_population(-1.0, 10.0)
        with pytest.raises(DomainError):
            stationary_population(1.0, 0.0)


class TestMasterRhs:
    def test_fixed_point(self):
        for gap, t_eff in [(5.0, THE), (3.0, 120.0), (0.3, 7.0)]:
            p = stationary_population(gap, t_eff)
            assert master_rhs(p, gap, t_eff, 0.005) == pytest.approx(0.0, abs=1e-18)

    def test_zero_population(self):
        assert master_rhs(0.0, 4.0, THE, 0.005) == -0.005

    def test_frozen_value(self):
        assert master_rhs(-0.003, 5.0, THE, 0.005) == pytest.approx(RHS_REF, rel=1e-14)

    def test_zero_gap(self):
        assert master_rhs(0.0, 0.0, THE, 0.005) == -0.005
        with pytest.raises(DomainError):
            master_rhs(-0.2, 0.0, THE, 0.005)


class TestGapFromState:
    def test_stationary_inverse(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            gap = rng.uniform(0.01, 30.0)
            t_eff = rng.uniform(1.0, 800.0)
            p = stationary_population(gap, t_eff)
            assert gap_from_state(p, 0.0, t_eff, 0.005) == pytest.approx(gap, rel=1e-12)

    def test_round_trip_with_dynamics(self):
        rng = np.random.default_rng(9)
        gamma = 0.005
        for _ in range(300):
            gap = rng.uniform(0.05, 20.0)
            t_eff = rng.uniform(5.0, 800.0)
            p = -rng.uniform(1e-4, 0.3)
            rate = master_rhs(p, gap, t_eff, gamma)
            assert gap_from_state(p, rate, t_eff, gamma) == pytest.approx(gap, rel=1e-12)

    def test_frozen_value(self):
        assert gap_from_state(-0.003, 0.0, THE, 0.005) == pytest.approx(
            GAP_REF, rel=1e-14
        )

    def test_unreachable_state(self):
        with pytest.raises(InvalidStateError):
            gap_from_state(-0.5, -0.006, 100.0, 0.005)


class TestRates:
    def test_trivial(self):
        assert work_rate(0.0, -0.4) == 0.0
        assert heat_rate(5.0, RHS_REF) == pytest.approx(5.0 * RHS_REF / 2.0, rel=1e-15)

    def test_first_law_on_sampled_protocol(self):
        # smooth driving: gap(t) = 4 + sin(t); first law closes pointwise
        gamma, t_eff = 0.005, THE
        ts = np.linspace(0.0, 3.0, 4001)
        h = ts[1] - ts[0]
        gaps = 4.0 + np.sin(ts)
        p = stationary_population(gaps[0], t_eff)
        ps, rates = [p], [master_rhs(p, gaps[0], t_eff, gamma)]
        for i in range(1, len(ts)):
            # RK4 step of the driven dynamics
            def f(pp, t):
                return master_rhs(pp, 4.0 + math.sin(t), t_eff, gamma)

            t0 = ts[i - 1]
            k1 = f(p, t0)
            k2 = f(p + 0.5 * h * k1, t0 + 0.5 * h)
            k3 = f(p + 0.5 * h * k2, t0 + 0.5 * h)
            k4 = f(p + h * k3, t0 + h)
            p += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            ps.append(p)
            rates.append(master_rhs(p, gaps[i], t_eff, gamma))
        ps = np.array(ps)
        rates = np.array(rates)
        energy = gaps * ps / 2.0
        de_dt = np.gradient(energy, h)
        total = np.cos(ts) * ps / 2.0 + gaps * rates / 2.0  # work + heat rates
        assert np.max(np.abs(de_dt[2:-2] - total[2:-2])) < 1e-9

    def test_static_state_conserves_energy(self):
        assert work_rate(0.0, -0.1) + heat_rate(3.0, 0.0) == 0.0


class TestEntropy:
    def test_limits(self):
        assert entropy(0.0) == pytest.approx(math.log(2.0), rel=1e-15)
        assert entropy(1.0) == 0.0
        assert entropy(-1.0) == 0.0

    def test_frozen_value(self):
        assert entropy(-0.5) == pytest.approx(ENTROPY_HALF, rel=1e-14)

    def test_symmetry(self):
        for p in np.linspace(0.0, 0.999, 200):
            assert entropy(p) == pytest.approx(entropy(-p), rel=1e-14)

    def test_strictly_concave(self):
        grid = np.linspace(-0.99, 0.99, 397)
        values = np.array([entropy(p) for p in grid])
        second = values[2:] - 2.0 * values[1:-1] + values[:-2]
        assert np.all(second < 0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy(1.0001)


class TestCycleBoundaries:
    def test_reference_values(self, ref_params):
        b = cycle_boundaries(ref_params)
        assert b.p0 == pytest.approx(P_SS_GAP5, rel=1e-14)
        assert b.p1 == pytest.approx(P_SS_GAP3, rel=1e-14)
        assert b.delta_c == pytest.approx(DELTA_C_REF, rel=1e-14)
        assert b.delta_d == pytest.approx(DELTA_D_REF, rel=1e-14)
        assert b.delta_s == pytest.approx(DELTA_S_REF, rel=1e-12)

    def test_population_ordering_and_entropy_sign(self, ref_params):
        b = cycle_boundaries(ref_params)
        assert b.p0 < b.p1 < 0.0
        assert b.delta_s > 0.0

    def test_cold_side_consistency(self):
        # the scaled gaps leave the corner populations stationary on the cold side
        for t_cold in (9.46, 12.9, 20.0, 24.94):
            params = make_params(t_cold=t_cold)
            b = cycle_boundaries(params)
            t_cold_eff = params.t_cold_eff
            assert -math.tanh(b.delta_d / (2.0 * t_cold_eff)) == pytest.approx(
                b.p0, rel=1e-14
            )
            assert -math.tanh(b.delta_c / (2.0 * t_cold_eff)) == pytest.approx(
                b.p1, rel=1e-14
            )

    def test_equal_tuning_scaling(self):
        # with r_H = r_C the gap rescaling ratio collapses to T_C / T_H
        params = make_params(t_cold=12.9, r_hot=1.3, r_cold=1.3)
        b = cycle_boundaries(params)
        assert b.delta_c / params.delta_b == pytest.approx(12.9 / 25.8, rel=1e-14)
        assert b.delta_d / params.delta_a == pytest.approx(12.9 / 25.8, rel=1e-14)

    def test_degenerate_cycle(self):
        with pytest.raises(DegenerateCycleError):
            make_params(delta_a=3.0, delta_b=3.0)


class TestEngineParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            make_params(delta_a=2.0, delta_b=3.0)
        with pytest.raises(DomainError):
            make_params(gamma=0.0)
        with pytest.raises(DomainError):
            EngineParams(Bath(10.0, 1.0), Bath(20.0, 1.5), 5.0, 3.0, 0.005)

    def test_metadata_warnings(self):
        assert make_params().metadata_warnings() == ()
        hot_gap = make_params(delta_a=30.0, delta_b=3.0)
        assert any("high-temperature" in w for w in hot_gap.metadata_warnings())
        swapped = EngineParams(Bath(25.8, 1.8), Bath(3.0, 2.0), 5.0, 3.0, 0.005)
        assert any("cold tuning" in w for w in swapped.metadata_warnings())
