import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irepta.errors import ConfigError, InfeasibleError
from irepta.milfp import check_solution
from irepta.model import (CAPACITY_KEYS, SCHEDULE_KEYS, UNIT_KEYS, PlanningConfig,
                          RenewableProfile, as_transient_coefficients, build_deterministic_model,
                          build_fixed_ras_milp, build_revenue_milp, config_hash, crf,
                          default_facilities, plan_diagnostics, simulate_operation, solve_model,
                          synthetic_profile, transient_factors)


# capital recovery ------------------------------------------------------------

@pytest.mark.parametrize("r", [0.01, 0.08, 0.5])
def test_crf_one_year(r):
    assert crf(r, 1) == pytest.approx(1 + r, rel=1e-15)


def test_crf_zero_interest():
    assert crf(0.0, 20) == 0.05


def test_crf_against_annuity_sum():
    # an annuity of crf per year repays one unit of capital: 1 / sum of discount factors
    ref = 1.0 / sum(1.08 ** -y for y in range(1, 21))
    assert crf(0.08, 20) == pytest.approx(ref, rel=1e-12)
    assert crf(0.08, 20) == pytest.approx(0.101852, abs=1e-6)


def test_crf_rejects_bad_input():
    with pytest.raises(ConfigError):
        crf(-0.1, 10)
    with pytest.raises(ConfigError):
        crf(0.1, 0)


# building --------------------------------------------------------------------

def two_step():
    return PlanningConfig(N=2, dt_as=2), RenewableProfile([0.5, 0.6], [0.2, 0.0], 1.0)


def test_variable_census_two_steps():
    cfg, prof = two_step()
    inst = build_deterministic_model(cfg, default_facilities(), prof)
    N, K = 2, 1
    # 6 capacities, 3 unit counts, 11 per-step flows, 2 storage levels with
    # N+1 entries, K setpoints and N exclusivity binaries
    expected = 6 + 3 + 11 * N + 2 * (N + 1) + K + N
    assert len(inst.col_names) == expected == 40
    assert inst.problem.n_y == 3 + N
    for name in CAPACITY_KEYS + UNIT_KEYS + SCHEDULE_KEYS + ("n_HS", "ESOC", "q_qss", "delta"):
        assert name in inst.index
    cols = np.concatenate(list(inst.index.values()))
    assert np.array_equal(np.sort(cols), np.arange(expected))  # one column per variable
    assert np.all(inst.lo[inst.index["P_curt"]] >= 0)


def test_relaxed_bess_has_only_unit_integers():
    cfg, prof = two_step()
    inst = build_deterministic_model(replace(cfg, relax_bess_binaries=True), default_facilities(), prof)
    names = [inst.col_names[c] for c in inst.y_cols]
    assert sorted(names) == ["N_AE", "N_S", "N_W"]


def test_zero_profile_builds_but_is_infeasible():
    cfg = PlanningConfig(N=24, relax_bess_binaries=True)
    prof = RenewableProfile(np.zeros(24), np.zeros(24), 1.0)
    inst = build_deterministic_model(cfg, default_facilities(), prof)
    assert inst.problem.n_y == 3
    with pytest.raises(InfeasibleError):
        solve_model(inst)


def test_synthetic_solar_night_is_exactly_zero():
    prof = synthetic_profile(72, 1.0, seed=4)
    s = prof.p_s_sta
    assert np.all((s == 0) | (s > 1e-6))
    assert np.all(s[(np.arange(72) % 24 <= 6) | (np.arange(72) % 24 >= 18)] == 0)


def test_config_validation():
    with pytest.raises(ConfigError):
        PlanningConfig(N=24, dt=1.0, dt_as=5.0).validate()
    with pytest.raises(ConfigError):
        PlanningConfig(c_h2a=0.0).validate()
    with pytest.raises(ConfigError):
        RenewableProfile([0.5, 1.2], [0.0, 0.0], 1.0)
    with pytest.raises(ConfigError):
        PlanningConfig(ramp_down=0.1).validate()


def test_config_hash_tracks_inputs():
    cfg, prof = two_step()
    facs = default_facilities()
    h = config_hash(cfg, facs, prof)
    assert h == config_hash(cfg, default_facilities(), prof)
    assert h != config_hash(replace(cfg, r=0.07), facs, prof)


# transient -------------------------------------------------------------------

def test_transient_off_is_piecewise_constant():
    Q = as_transient_coefficients(4.0, 0.0, 1.0, n_periods=3)
    np.testing.assert_array_equal(Q, np.kron(np.eye(3), np.ones((4, 1))))


def test_transient_equal_setpoints_constant():
    Q = as_transient_coefficients(6.0, 2.0, 1.0, n_periods=4)
    np.testing.assert_allclose(Q @ np.full(4, 3.7), 3.7, rtol=0, atol=1e-12)


def test_transient_closed_form():
    np.testing.assert_allclose(transient_factors(4.0, 2.0, 1.0), np.exp(-np.arange(4) / 2.0),
                               rtol=0, atol=0)
    qk = np.array([10.0, 14.0, 9.0])
    Q = as_transient_coefficients(4.0, 2.0, 1.0, n_periods=3)
    q = Q @ qk
    for k in range(3):
        nxt = qk[min(k + 1, 2)]
        for tau in range(4):
            expect = qk[k] + (qk[k] - nxt) * math.exp(-tau / 2.0)
            assert q[4 * k + tau] == pytest.approx(expect, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(steps=st.integers(1, 8), periods=st.integers(1, 5), t_trans=st.floats(0.1, 10),
       seed=st.integers(0, 1000))
def test_transient_rows_sum_to_one(steps, periods, t_trans, seed):
    Q = as_transient_coefficients(float(steps), t_trans, 1.0, periods)
    # the map preserves constants and only couples a period to its successor
    np.testing.assert_allclose(Q.sum(axis=1), 1.0, atol=1e-12)
    for t in range(steps * periods):
        nz = np.flatnonzero(Q[t])
        assert set(nz) <= {t // steps, t // steps + 1}


# solved desk instance ----------------------------------------------------------

def test_desk_plan_invariants(desk_solution):
    inst, plan, sol = desk_solution
    d = plan_diagnostics(inst, plan)
    assert d["power_balance"] <= 1e-6
    assert d["hs_boundary"] <= 1e-6 * max(1.0, plan.capacities["C_HS"])
    assert d["bess_boundary"] <= 1e-6 * max(1.0, plan.capacities["C_B"])
    assert d["complementarity"] <= 1e-6
    assert d["lcoa_identity"] <= 1e-8
    assert d["unit_integrality"] == 0.0
    assert plan.r_as <= 1 + 1e-9
    rep = check_solution(inst.problem, *inst.pack(plan.vector))
    assert rep.ok


def test_desk_plan_range_boxes_and_ramps(desk_solution, desk_cfg, facs):
    inst, plan, _ = desk_solution
    s, c = plan.schedules, plan.capacities
    tol = 1e-6
    ae = facs["AE"]
    assert np.all(s["P_AE"] >= ae.eta_lo * c["C_AE"] - tol)
    assert np.all(s["P_AE"] <= ae.eta_hi * c["C_AE"] + tol)
    qr = desk_cfg.q_rated
    asf = facs["AS"]
    assert np.all(s["q_out"] >= asf.eta_lo * qr - tol * qr)
    assert np.all(s["q_out"] <= asf.eta_hi * qr + tol * qr)
    dq = np.diff(s["q_out"])
    assert np.all(dq >= desk_cfg.ramp_down * qr - tol * qr)
    assert np.all(dq <= desk_cfg.ramp_up * qr + tol * qr)
    assert np.all(s["P_curt"] >= -tol)


def test_unit_sizes(desk_solution, facs):
    _, plan, _ = desk_solution
    for key in ("W", "S", "AE"):
        assert plan.capacities[f"C_{key}"] == plan.units[f"N_{key}"] * facs[key].C0


def test_flh_from_schedule(desk_solution, desk_cfg):
    _, plan, _ = desk_solution
    total = sum(float(v) for v in plan.schedules["P_AE"])
    ref = 8760.0 / (desk_cfg.N * desk_cfg.dt) * desk_cfg.dt * total / plan.capacities["C_AE"]
    assert plan.flh_ae == pytest.approx(ref, rel=1e-12)


def test_lcoa_recomputed_matches_solver(desk_solution):
    _, plan, sol = desk_solution
    assert plan.lcoa == pytest.approx(sol.objective, rel=1e-8)


def test_binaries_give_same_objective(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, relaxed, _ = desk_solution
    inst = build_deterministic_model(replace(desk_cfg, relax_bess_binaries=False), facs, desk_profile)
    plan, _ = solve_model(inst, bnb)
    assert plan.lcoa == pytest.approx(relaxed.lcoa, rel=1e-6)
    assert np.all(plan.schedules["delta"] == np.round(plan.schedules["delta"]))


# fixed utilization and revenue ---------------------------------------------------

def test_fixed_ras_one_pins_output(desk_cfg, facs, desk_profile, bnb):
    plan, _ = solve_model(build_fixed_ras_milp(desk_cfg, facs, desk_profile, 1.0), bnb)
    assert plan.O_A == pytest.approx(desk_cfg.C_AS, rel=1e-9)


def test_fixed_ras_below_minimum_load_is_infeasible(desk_cfg, facs, desk_profile, bnb):
    # the synthesis loop cannot run below its minimum load
    with pytest.raises(InfeasibleError):
        solve_model(build_fixed_ras_milp(desk_cfg, facs, desk_profile, 0.05), bnb)
    with pytest.raises(ConfigError):
        build_fixed_ras_milp(desk_cfg, facs, desk_profile, 1.5)


def test_revenue_model(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, lcoa_plan, _ = desk_solution
    zero, _ = solve_model(build_revenue_milp(desk_cfg, facs, desk_profile, 0.0), bnb)
    assert zero.revenue(0.0) <= 0
    price = 2000.0
    rev, _ = solve_model(build_revenue_milp(desk_cfg, facs, desk_profile, price), bnb)
    assert rev.revenue(price) >= lcoa_plan.revenue(price) - 1e-6 * abs(rev.revenue(price))
    assert rev.lcoa >= lcoa_plan.lcoa - 1e-9 * lcoa_plan.lcoa


# operation simulation --------------------------------------------------------------

def test_simulation_reproduces_plan(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, plan, _ = desk_solution
    res = simulate_operation(plan.pinned_capacities(), desk_cfg, facs, desk_profile, bnb=bnb)
    assert res.dlcoa == pytest.approx(plan.lcoa, rel=1e-6)


def test_simulation_more_energy_not_worse(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, plan, _ = desk_solution
    caps = plan.pinned_capacities()
    base = simulate_operation(caps, desk_cfg, facs, desk_profile, bnb=bnb).dlcoa
    more = simulate_operation(caps, desk_cfg, facs, desk_profile, 1.05, 1.05, bnb=bnb).dlcoa
    assert more <= base * (1 + 1e-9)
    with pytest.raises(InfeasibleError):
        simulate_operation(caps, desk_cfg, facs, desk_profile, 0.0, 0.0, bnb=bnb)


def test_simulation_snaps_units(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, plan, _ = desk_solution
    caps = plan.pinned_capacities()
    caps.update(N_W=35, C_W=35 * facs["W"].C0)
    res = simulate_operation(caps, desk_cfg, facs, desk_profile, 1.2, 1.2, bnb=bnb)
    assert res.plan.capacities["C_W"] == 218.75
    assert res.plan.units["N_W"] == 35
