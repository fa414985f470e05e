import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irepta.errors import ConfigError, DataError
from irepta.model import simulate_operation
from irepta.scenarios import (HistoricalFlh, ScenarioSet, fit_markov_chain, posteriori_elcoa,
                              read_history, read_scenarios, sample_scenarios, scale_profile,
                              synthetic_history, transition_frequencies, write_history,
                              write_scenarios)


def test_transition_rows_sum_to_one():
    model = fit_markov_chain(synthetic_history(20, seed=3), 5)
    for chain in (model.wind, model.solar):
        assert chain.P.shape == (5, 5)
        assert np.all(np.abs(chain.P.sum(axis=1) - 1.0) <= 1e-12)
        assert np.all(chain.P > 0)  # one pseudo-count per cell
        assert chain.counts.sum() == 19


def test_fit_counts_by_hand():
    # deviations alternate low/high, so with two states every transition flips
    hist = HistoricalFlh([1, 2, 3, 4, 5, 6], [90, 110, 90, 110, 90, 110],
                         [100, 101, 102, 103, 104, 105])
    chain = fit_markov_chain(hist, 2).wind
    np.testing.assert_array_equal(chain.counts, [[0, 3], [2, 0]])
    np.testing.assert_allclose(chain.P, [[1 / 5, 4 / 5], [3 / 4, 1 / 4]], rtol=0, atol=1e-15)


def test_constant_history_warns_single_state():
    hist = HistoricalFlh(np.arange(6), np.full(6, 2000.0), np.linspace(1500, 1600, 6))
    with pytest.warns(UserWarning):
        model = fit_markov_chain(hist, 3)
    assert model.wind.n_states == 1
    scen = sample_scenarios(model, 50, seed=0)
    assert np.all(scen.f_w == 1.0)


def test_fit_errors():
    hist = synthetic_history(4, seed=0)
    with pytest.raises(DataError):
        fit_markov_chain(hist, 5)
    with pytest.raises(ConfigError):
        fit_markov_chain(hist, 1)
    with pytest.raises(DataError):
        HistoricalFlh([1, 2], [100, -1], [1, 1])


def test_exclude_years():
    hist = synthetic_history(20, seed=1)
    model = fit_markov_chain(hist, 4, exclude_years=[2001, 2002])
    assert model.meta["n_years"] == 18
    assert model.wind.counts.sum() == 17


def test_empirical_frequencies_match():
    model = fit_markov_chain(synthetic_history(20, seed=3), 5)
    scen = sample_scenarios(model, 100_000, seed=7)
    for chain, states in ((model.wind, scen.states_w), (model.solar, scen.states_s)):
        freq = transition_frequencies(states, chain.n_states)
        assert np.max(np.abs(freq - chain.P)) <= 0.02


def test_sampling_deterministic_and_seed_sensitive():
    model = fit_markov_chain(synthetic_history(20, seed=3), 5)
    a = sample_scenarios(model, 500, seed=11)
    b = sample_scenarios(model, 500, seed=11)
    c = sample_scenarios(model, 500, seed=12)
    np.testing.assert_array_equal(a.f_w, b.f_w)
    np.testing.assert_array_equal(a.f_s, b.f_s)
    assert not np.array_equal(a.f_w, c.f_w)


def test_byte_identical_files(tmp_path):
    model = fit_markov_chain(synthetic_history(20, seed=3), 5)
    paths = []
    for i in range(2):
        scen = sample_scenarios(model, 300, seed=5)
        p = tmp_path / f"s{i}.csv"
        write_scenarios(scen, None, p, "seed=5")
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]


def test_history_round_trip(tmp_path):
    hist = synthetic_history(15, seed=9)
    p = tmp_path / "h.csv"
    write_history(hist, p, "comment line")
    back = read_history(p)
    np.testing.assert_array_equal(back.flh_wind, hist.flh_wind)
    np.testing.assert_array_equal(back.years, hist.years)
    bad = tmp_path / "bad.csv"
    bad.write_text("year,flh_wind,flh_sun\n2001,1,2\n")
    with pytest.raises(DataError, match="flh_sun"):
        read_history(bad)


def test_scenario_round_trip(tmp_path):
    scen = ScenarioSet([1.0, 0.9], [1.1, 1.0])
    p = tmp_path / "s.csv"
    write_scenarios(scen, np.array([3000.0, np.nan]), p)
    back, dl = read_scenarios(p)
    np.testing.assert_array_equal(back.f_w, scen.f_w)
    assert dl[0] == 3000.0 and np.isnan(dl[1])


def test_synthetic_history_within_envelope():
    hist = synthetic_history(200, seed=2)
    dw, ds = (hist.flh_wind / 3658 - 1), (hist.flh_solar / 1721 - 1)
    assert dw.min() >= -0.0726 and dw.max() <= 0.0739
    assert ds.min() >= -0.0324 and ds.max() <= 0.0293


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000))
def test_sampled_states_are_valid(n_states, seed):
    hist = synthetic_history(max(n_states + 2, 10), seed=seed)
    model = fit_markov_chain(hist, n_states)
    scen = sample_scenarios(model, 200, seed=seed)
    assert scen.states_w.min() >= 0 and scen.states_w.max() < model.wind.n_states
    assert np.all(np.isin(scen.f_w, model.wind.factors(np.arange(model.wind.n_states))))


def test_scale_profile_clips(desk_profile):
    sp_ = scale_profile(desk_profile, 1.0, 1.0)
    assert sp_.ratio_w == 1.0 and not sp_.clipped
    big = scale_profile(desk_profile, 3.0, 1.0)
    assert big.clipped and big.ratio_w < 3.0
    assert big.profile.p_w_sta.max() <= 1.0


# expected LCOA ---------------------------------------------------------------------

def test_unit_factors_reproduce_dlcoa(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, plan, _ = desk_solution
    res = posteriori_elcoa(plan, ScenarioSet(np.ones(3), np.ones(3)), desk_cfg, facs,
                           desk_profile, bnb)
    assert res.n_unique == 1
    assert res.elcoa == pytest.approx(plan.lcoa, rel=1e-6)


def test_elcoa_is_mean_of_independent_solves(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, plan, _ = desk_solution
    scen = ScenarioSet([0.95, 1.05, 0.95, 1.0, 1.05], [1.0, 0.98, 1.0, 1.02, 0.98])
    res = posteriori_elcoa(plan, scen, desk_cfg, facs, desk_profile, bnb, workers=2)
    assert res.n_unique == 3
    per = []
    for fw, fs in zip(scen.f_w, scen.f_s):
        prof = scale_profile(desk_profile, fw, fs).profile
        per.append(simulate_operation(plan.pinned_capacities(), desk_cfg, facs, prof,
                                      bnb=bnb).dlcoa)
    np.testing.assert_array_equal(res.dlcoa, per)
    assert res.elcoa == float(np.mean(per))


def test_penalty_mode(desk_solution, desk_cfg, facs, desk_profile, bnb):
    _, plan, _ = desk_solution
    scen = ScenarioSet([1.0, 0.01], [1.0, 0.01])
    res = posteriori_elcoa(plan, scen, desk_cfg, facs, desk_profile, bnb)
    assert res.n_infeasible == 1 and res.distribution.size == 1
    pen = posteriori_elcoa(plan, scen, desk_cfg, facs, desk_profile, bnb, "penalty", 1e5)
    assert pen.elcoa == pytest.approx((plan.lcoa + 1e5) / 2, rel=1e-6)
    with pytest.raises(ConfigError):
        posteriori_elcoa(plan, scen, desk_cfg, facs, desk_profile, bnb, "penalty", None)
