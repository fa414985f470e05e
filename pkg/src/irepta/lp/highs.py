"""HiGHS dual simplex through :func:`scipy.optimize.linprog`."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..errors import NumericalFailure
from .problem import LpProblem, LpSolution, LpStatus


_ATTEMPTS = (("highs-ds", True), ("highs-ds", False), ("highs-ipm", False))


def solve_highs(p: LpProblem, *, tol_primal: float = 1e-9, tol_dual: float = 1e-9,
                max_iter: int | None = None, time_limit: float | None = None) -> LpSolution:
    A = p.A
    L, E, G = p.sense == "L", p.sense == "E", p.sense == "G"
    A_ub = sp.vstack([A[L], -A[G]], format="csr") if (L.any() or G.any()) else None
    b_ub = np.concatenate([p.rhs[L], -p.rhs[G]]) if A_ub is not None else None
    A_eq = A[E] if E.any() else None
    b_eq = p.rhs[E] if E.any() else None
    bounds = np.column_stack([
        np.where(np.isfinite(p.lo), p.lo, -np.inf),
        np.where(np.isfinite(p.hi), p.hi, np.inf),
    ])
    options = {
        "primal_feasibility_tolerance": tol_primal,
        "dual_feasibility_tolerance": tol_dual,
        "presolve": True,
    }
    if max_iter is not None:
        options["maxiter"] = int(max_iter)
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    # presolve occasionally leaves the dual simplex in an unknown state on the
    # big-M models; the same LP then goes through cleanly without it or by IPM
    for method, presolve in _ATTEMPTS:
        options["presolve"] = presolve
        res = linprog(p.c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                      method=method, options=options)
        if res.status != 4:
            break
    nit = int(getattr(res, "nit", 0) or 0)
    if res.status == 0:
        x = np.minimum(np.maximum(res.x, p.lo), p.hi)
        return LpSolution(LpStatus.OPTIMAL, x, p.objective(x), nit, "highs")
    if res.status == 1:
        return LpSolution(LpStatus.ITER_LIMIT, None, np.nan, nit, "highs")
    if res.status == 2:
        return LpSolution(LpStatus.INFEASIBLE, None, np.nan, nit, "highs")
    if res.status == 3:
        return LpSolution(LpStatus.UNBOUNDED, None, np.nan, nit, "highs")
    raise NumericalFailure(f"HiGHS failed: {res.message}")
