"""Dinkelbach parametric iteration, kept as an independent check on the
Charnes-Cooper route. Works directly on the untransformed LFP."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import InfeasibleError, NoConvergence, NumericalFailure
from ..lp import LpConfig, LpProblem, LpStatus, solve_lp
from .problem import LfpProblem


@dataclass
class DinkelbachResult:
    value: float
    v: np.ndarray
    iterations: int


def _subproblem(lfp: LfpProblem, lam: float) -> LpProblem:
    # q0 + q·v >= eps_den stands in for the strict positivity requirement
    A = sp.vstack([lfp.A_ub, lfp.A_eq, sp.csr_matrix(lfp.q[None, :])], format="csr")
    sense = ["L"] * lfp.A_ub.shape[0] + ["E"] * lfp.A_eq.shape[0] + ["G"]
    rhs = np.concatenate([lfp.b_ub, lfp.b_eq, [lfp.eps_den - lfp.q0]])
    return LpProblem(lfp.p - lam * lfp.q, A, np.array(sense, dtype="<U1"), rhs,
                     lfp.lo, lfp.hi, offset=lfp.p0 - lam * lfp.q0)


def _solve(lp: LpProblem, cfg: LpConfig) -> np.ndarray:
    sol = solve_lp(lp, cfg)
    if sol.status is LpStatus.INFEASIBLE:
        raise InfeasibleError("LFP has no feasible point with positive denominator")
    if sol.status is not LpStatus.OPTIMAL:
        raise NumericalFailure(f"Dinkelbach subproblem: {sol.status.value}")
    return sol.x


def dinkelbach_solve(lfp: LfpProblem, tol: float = 1e-10, max_iter: int = 100,
                     lp_cfg: LpConfig | None = None) -> DinkelbachResult:
    lp_cfg = lp_cfg or LpConfig()
    # any feasible point seeds the ratio; minimizing the numerator gives one
    v = _solve(_subproblem(lfp, 0.0), lp_cfg)
    lam = lfp.ratio(v)
    for it in range(1, max_iter + 1):
        v = _solve(_subproblem(lfp, lam), lp_cfg)
        F = lfp.numerator(v) - lam * lfp.denominator(v)
        if abs(F) <= tol * max(1.0, abs(lfp.denominator(v))):
            return DinkelbachResult(lam, v, it)
        lam = lfp.ratio(v)
    raise NoConvergence(f"Dinkelbach did not converge in {max_iter} iterations")


def dinkelbach_oracle(lfp: LfpProblem, tol: float = 1e-10, max_iter: int = 100,
                      lp_cfg: LpConfig | None = None) -> float:
    """Optimal value of the LFP by parametric iteration on ``N(v) - λ D(v)``."""
    return dinkelbach_solve(lfp, tol, max_iter, lp_cfg).value
