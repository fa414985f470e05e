"""Random instance generators shared by the test modules."""

import itertools

import numpy as np
import scipy.sparse as sp

from irepta.lp import LpConfig
from irepta.milfp import (LfpProblem, MilfpProblem, charnes_cooper_transform, recover_solution,
                          relax)
from irepta.lp import LpStatus, solve_lp


def random_lfp(rng, n_max=6, m_max=8, allow_negative=True):
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(0, m_max + 1))
    lo = rng.uniform(-2, 0, n) if allow_negative else np.zeros(n)
    lo = np.where(rng.random(n) < 0.5, 0.0, lo)
    hi = lo + rng.uniform(0.5, 3, n)
    q = rng.uniform(-1, 1, n)
    q0 = 0.5 + np.abs(q) @ np.maximum(np.abs(lo), np.abs(hi))
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(lo, hi)
    b = A @ x0 + rng.uniform(0, 1, m)
    return LfpProblem(rng.normal(), rng.normal(size=n), q0, q, sp.csr_matrix(A), b,
                      sp.csr_matrix((0, n)), np.zeros(0), lo, hi)


def random_milfp(rng, n_int_max=3, n_cont_max=4, m_max=4, dom_max=5, unit_den=False):
    nJ = int(rng.integers(1, n_int_max + 1))
    nI = int(rng.integers(0, n_cont_max + 1))
    m = int(rng.integers(1, m_max + 1))
    y_lo = rng.integers(0, 2, nJ).astype(float)
    y_hi = np.minimum(y_lo + rng.integers(1, dom_max + 1, nJ), dom_max).astype(float)
    x_lo = np.where(rng.random(nI) < 0.3, -1.0, 0.0)
    x_hi = x_lo + rng.uniform(1, 4, nI)
    if unit_den:
        q1, q2, q0 = np.zeros(nI), np.zeros(nJ), 1.0
    else:
        q1, q2 = rng.uniform(0, 1, nI), rng.uniform(-0.5, 1, nJ)
        q0 = 0.5 + np.abs(q1) @ np.maximum(np.abs(x_lo), x_hi) + np.abs(q2) @ y_hi
    A1, A2 = rng.normal(size=(m, nI)), rng.normal(size=(m, nJ))
    x0 = rng.uniform(x_lo, x_hi)
    y0 = np.array([rng.integers(a, b + 1) for a, b in zip(y_lo, y_hi)], dtype=float)
    B = A1 @ x0 + A2 @ y0 + rng.uniform(0, 1.5, m)
    return MilfpProblem(rng.normal(), rng.normal(size=nI), rng.normal(size=nJ), q0, q1, q2,
                        sp.csr_matrix(A1), sp.csr_matrix(A2), B, x_lo, x_hi, y_lo, y_hi)


def fixed_integer_lfp(prob, y):
    """LFP over x alone with the integer part pinned at ``y``."""
    y = np.asarray(y, dtype=float)
    nI = prob.n_x
    return LfpProblem(prob.p0 + prob.p2 @ y, prob.p1, prob.q0 + prob.q2 @ y, prob.q1,
                      prob.A1, prob.B - prob.A2 @ y, prob.E1, prob.Beq - prob.E2 @ y,
                      prob.x_lo, prob.x_hi) if nI else None


def enumerate_optimum(prob, lp_cfg=None):
    """Exhaustive integer-grid oracle: one C&C LP per integer assignment."""
    best = np.inf
    ranges = [range(int(a), int(b) + 1) for a, b in zip(prob.y_lo, prob.y_hi)]
    for y in itertools.product(*ranges):
        y = np.array(y, dtype=float)
        if prob.n_x == 0:
            if np.all(prob.A2 @ y <= prob.B + 1e-9) and prob.denominator([], y) > 0:
                best = min(best, prob.ratio(np.zeros(0), y))
            continue
        lfp = fixed_integer_lfp(prob, y)
        cc = charnes_cooper_transform(lfp)
        sol = solve_lp(cc.lp, lp_cfg or LpConfig())
        if sol.status is LpStatus.OPTIMAL:
            best = min(best, sol.objective)
    return best
