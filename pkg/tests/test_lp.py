import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from irepta.errors import ConfigError
from irepta.lp import (LpConfig, LpProblem, LpStatus, export_mps, import_mps, solve_highs,
                       solve_lp, solve_simplex)


def small_lp():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6 ; optimum (1.6, 1.2), value -2.8 as a min
    return LpProblem.from_rows([-1, -1], [({0: 1, 1: 2}, "L", 4), ({0: 3, 1: 1}, "L", 6)])


def random_lp(rng):
    n = int(rng.integers(1, 8))
    m = int(rng.integers(0, 8))
    lo = np.where(rng.random(n) < 0.3, -np.inf, rng.uniform(-2, 0, n))
    hi = np.where(rng.random(n) < 0.3, np.inf, rng.uniform(0.5, 3, n))
    A = rng.normal(size=(m, n))
    x0 = np.clip(rng.normal(size=n), np.where(np.isfinite(lo), lo, -5), np.where(np.isfinite(hi), hi, 5))
    sense = rng.choice(["L", "G", "E"], size=m, p=[0.5, 0.3, 0.2])
    slack = rng.uniform(0, 1, m)
    rhs = A @ x0 + np.where(sense == "L", slack, np.where(sense == "G", -slack, 0.0))
    # box the free directions so the LP stays bounded
    c = rng.normal(size=n)
    lo = np.where(np.isfinite(lo) | (c < 0), lo, -10.0)
    hi = np.where(np.isfinite(hi) | (c > 0), hi, 10.0)
    lo, hi = np.where(np.isinf(lo), -10.0, lo), np.where(np.isinf(hi), 10.0, hi)
    return LpProblem(c, sp.csr_matrix(A), sense, rhs, np.minimum(lo, x0), np.maximum(hi, x0))


@pytest.mark.parametrize("backend", ["bundled", "highs"])
def test_small_lp(backend):
    sol = solve_lp(small_lp(), LpConfig(backend=backend))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(-2.8, abs=1e-9)
    np.testing.assert_allclose(sol.x, [1.6, 1.2], atol=1e-9)


@pytest.mark.parametrize("backend", ["bundled", "highs"])
def test_infeasible_and_unbounded(backend):
    cfg = LpConfig(backend=backend)
    infeas = LpProblem.from_rows([1.0], [({0: 1}, "G", 2)], hi=[1.0])
    assert solve_lp(infeas, cfg).status is LpStatus.INFEASIBLE
    unb = LpProblem.from_rows([-1.0, 0.0], [({0: 1, 1: -1}, "L", 1)])
    assert solve_lp(unb, cfg).status is LpStatus.UNBOUNDED


def test_bundled_agrees_with_highs_on_random_lps():
    rng = np.random.default_rng(11)
    for _ in range(60):
        p = random_lp(rng)
        a, b = solve_simplex(p), solve_highs(p)
        assert a.status == b.status
        if a.status is LpStatus.OPTIMAL:
            assert a.objective == pytest.approx(b.objective, abs=1e-7, rel=1e-8)
            rows, bnds = p.residuals(a.x)
            assert rows <= 1e-7 and bnds <= 1e-9


def test_stray_tiny_coefficient_does_not_break_scaling():
    # a 1e-50 entry once pushed the scaling factors to 1e24 and the result off by a third
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = random_lp(rng)
        if p.A.shape[0] == 0:
            continue
        A = p.A.toarray()
        A[0, 0] = 1e-50
        q = LpProblem(p.c, sp.csr_matrix(A), p.sense, p.rhs, p.lo, p.hi)
        a, b = solve_simplex(q), solve_highs(q)
        assert a.status == b.status
        if a.status is LpStatus.OPTIMAL:
            assert a.objective == pytest.approx(b.objective, abs=1e-7, rel=1e-8)


def test_degenerate_lp_terminates():
    # many constraints active at the optimum vertex (0, 0)
    rows = [({0: 1, 1: k}, "G", 0.0) for k in range(1, 12)]
    p = LpProblem.from_rows([1.0, 1.0], rows)
    sol = solve_simplex(p, bland_after=1)
    assert sol.status is LpStatus.OPTIMAL and sol.objective == pytest.approx(0.0, abs=1e-12)


def test_rejects_nan_and_shape_errors():
    with pytest.raises(ConfigError):
        LpProblem([np.nan], sp.csr_matrix((0, 1)), [], [], [0], [1])
    with pytest.raises(ConfigError):
        LpProblem([1, 2], sp.csr_matrix(np.ones((1, 3))), ["L"], [1], [0, 0], [1, 1])
    with pytest.raises(ConfigError):
        LpConfig(backend="cplex")


def test_mps_round_trip_preserves_solution():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = random_lp(rng)
        q = import_mps(export_mps(p))
        np.testing.assert_array_equal(q.c, p.c)
        np.testing.assert_array_equal(q.A.toarray(), p.A.toarray())
        np.testing.assert_array_equal(q.rhs, p.rhs)
        np.testing.assert_array_equal(q.lo, p.lo)
        np.testing.assert_array_equal(q.hi, p.hi)
        a, b = solve_highs(p), solve_highs(q)
        assert a.status == b.status
        if a.ok:
            assert a.objective == b.objective


def test_mps_infinite_bounds_and_offset():
    p = LpProblem([1.0, -1.0], sp.csr_matrix([[1.0, 1.0]]), ["E"], [1.0],
                  [-np.inf, 0.0], [np.inf, 5.0], offset=2.5)
    q = import_mps(export_mps(p))
    assert q.lo[0] == -np.inf and q.hi[0] == np.inf and q.hi[1] == 5.0
    assert q.offset == 2.5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_solution_is_feasible_and_not_beaten_by_vertices(seed):
    rng = np.random.default_rng(seed)
    p = random_lp(rng)
    sol = solve_simplex(p)
    if sol.status is not LpStatus.OPTIMAL:
        return
    rows, bnds = p.residuals(sol.x)
    assert rows <= 1e-7 and bnds <= 1e-9
    # no random feasible point does better
    for _ in range(30):
        x = rng.uniform(p.lo, p.hi)
        r, _ = p.residuals(x)
        if r <= 0:
            assert p.objective(x) >= sol.objective - 1e-7


def test_highs_retries_after_numerical_trouble(monkeypatch):
    import irepta.lp.highs as highs
    calls = []
    real = highs.linprog

    def flaky(*args, **kw):
        calls.append((kw["method"], kw["options"]["presolve"]))
        res = real(*args, **kw)
        if len(calls) == 1:
            res.status = 4
        return res

    monkeypatch.setattr(highs, "linprog", flaky)
    sol = solve_highs(small_lp())
    assert sol.status is LpStatus.OPTIMAL and sol.objective == pytest.approx(-2.8, abs=1e-9)
    assert calls == [("highs-ds", True), ("highs-ds", False)]
