import numpy as np
import pytest

from conftest import make_params
from spincarnot import (
    BranchKind,
    DomainError,
    ProtocolTrace,
    cycle_boundaries,
    cycle_energy_audit,
    heat_quadrature,
    integrate_master,
    quasi_static_audit,
    reconstruct_protocol,
    solve_k_for_duration,
    stationary_population,
)


def constant_trace(gap, p, t_total=200.0, n=51):
    times = np.linspace(0.0, t_total, n)
    return ProtocolTrace(
        times=times,
        populations=np.full(n, p),
        gaps=np.full(n, gap),
        jump_start=(gap, gap),
        jump_end=(gap, gap),
    )


class TestIntegrateMaster:
    def test_stationary_state_is_held(self, ref_params):
        t_eff = ref_params.t_hot_eff
        p = stationary_population(4.0, t_eff)
        out = integrate_master(constant_trace(4.0, p), t_eff, ref_params.gamma, 1.0)
        assert out.p_final == pytest.approx(p, abs=1e-15)
        assert abs(out.heat) < 1e-14
        assert out.work == 0.0

    def test_relaxation_toward_stationary(self, ref_params):
        # start away from the fixed point under a frozen gap: the population
        # relaxes onto it and the absorbed heat matches the energy change
        t_eff = ref_params.t_hot_eff
        p_star = stationary_population(4.0, t_eff)
        out = integrate_master(
            constant_trace(4.0, 2.0 * p_star, t_total=4000.0),
            t_eff,
            ref_params.gamma,
            1.0,
        )
        assert out.p_final == pytest.approx(p_star, rel=1e-9)
        assert out.heat == pytest.approx(4.0 * (p_star - 2.0 * p_star) / 2.0, rel=1e-8)
        assert out.work == 0.0

    def test_hot_branch_against_quadrature(self, ref_params, ref_optimum):
        boundaries = cycle_boundaries(ref_params)
        el = solve_k_for_duration(
            ref_optimum.t_hot_star, BranchKind.HOT_PLUS, boundaries,
            ref_params.gamma, ref_params.t_hot_eff,
        )
        trace = reconstruct_protocol(el, ref_params.gamma, 2048)
        out = integrate_master(
            trace, ref_params.t_hot_eff, ref_params.gamma,
            ref_optimum.t_hot_star / 4096.0,
        )
        assert out.p_final == pytest.approx(boundaries.p1, rel=1e-6)
        assert out.heat == pytest.approx(heat_quadrature(el), rel=1e-6)

    def test_branch_first_law(self, ref_params, ref_optimum):
        boundaries = cycle_boundaries(ref_params)
        el = solve_k_for_duration(
            ref_optimum.t_cold_star, BranchKind.COLD_MINUS, boundaries,
            ref_params.gamma, ref_params.t_cold_eff,
        )
        trace = reconstruct_protocol(el, ref_params.gamma, 1024)
        out = integrate_master(
            trace, ref_params.t_cold_eff, ref_params.gamma,
            ref_optimum.t_cold_star / 4096.0,
        )
        energy_change = (
            trace.gaps[-1] * out.p_final - trace.gaps[0] * trace.populations[0]
        ) / 2.0
        assert energy_change == pytest.approx(out.heat + out.work, abs=1e-14)

    def test_bad_inputs(self, ref_params):
        trace = constant_trace(4.0, -0.003)
        with pytest.raises(DomainError):
            integrate_master(trace, ref_params.t_hot_eff, ref_params.gamma, 0.0)


@pytest.fixture(scope="module")
def audit(ref_params, ref_optimum):
    return cycle_energy_audit(
        ref_params, ref_optimum.t_hot_star, ref_optimum.t_cold_star, n_samples=1024
    )


class TestCycleEnergyAudit:
    def test_heats_match_quadrature(self, audit, ref_optimum):
        assert audit["q_hot_integrated"] == pytest.approx(ref_optimum.q_hot, rel=1e-6)
        assert audit["q_cold_integrated"] == pytest.approx(ref_optimum.q_cold, rel=1e-6)

    def test_energy_books_close(self, audit, ref_optimum):
        assert abs(audit["energy_residual"]) < 1e-10 * ref_optimum.q_hot

    def test_net_work_output(self, audit, ref_optimum):
        expected = ref_optimum.q_hot + ref_optimum.q_cold
        assert audit["net_work_output"] == pytest.approx(expected, rel=1e-6)
        assert audit["net_work_output"] > 0.0

    def test_cycle_closes_in_population(self, audit, ref_params):
        boundaries = cycle_boundaries(ref_params)
        assert abs(audit["population_closure"]) < 1e-6 * abs(boundaries.p0)


@pytest.fixture(scope="module")
def report(ref_params):
    grid = np.geomspace(0.05, 20.0, 8) / ref_params.gamma
    return quasi_static_audit(ref_params, grid)


class TestQuasiStaticAudit:
    def test_efficiency_reaches_the_limit(self, report):
        assert report["eta_limit_gap"] < 1e-3
        assert report["eta_monotone_increasing"]

    def test_power_decays(self, report):
        assert report["power_monotone_decreasing"]
        assert report["power"][-1] < 1e-2 * report["power"][0]

    def test_heat_reaches_quasistatic_value(self, report):
        assert report["q_hot_limit_gap"] < 1e-4

    def test_first_order_corrections_negative(self, report):
        assert report["q1_negative_both"]

    def test_residuals_shrink_at_least_quadratically(self, report):
        assert report["residuals_shrink_fast"]
        assert report["fit"]["residual_slope_hot"] <= -1.8
        assert report["fit"]["residual_slope_cold"] <= -1.8

    def test_grid_validation(self, ref_params):
        with pytest.raises(DomainError):
            quasi_static_audit(ref_params, [10.0, 20.0, 30.0])
        with pytest.raises(DomainError):
            quasi_static_audit(ref_params, [10.0, 20.0, 40.0, 80.0])
