"""Bundled bounded-variable revised simplex.

Dense explicit basis inverse with product-form row updates and periodic
refactorization. Meant for the small and medium LPs that appear in tests and
branch-and-bound nodes of toy instances; desk-scale planning models should go
through the HiGHS backend.

Pricing is Dantzig (most negative reduced cost, lowest index on ties). After
``bland_after`` consecutive degenerate pivots the solver switches to Bland's
rule (lowest eligible index for entering and leaving) until the next
nondegenerate step.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericalFailure
from .problem import LpProblem, LpSolution, LpStatus

_AT_LO, _AT_HI, _FREE = 0, 1, 2


def equilibrate(A: np.ndarray, passes: int = 6, max_exp: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Geometric-mean row/column scaling factors, rounded to powers of two.

    Returns ``(r, s)`` with the scaled matrix ``diag(r) @ A @ diag(s)``.
    """
    m, n = A.shape
    r, s = np.ones(m), np.ones(n)
    absA = np.abs(A)
    # entries negligible against the largest one take no part in the scaling
    nz = absA > 1e-12 * absA.max(initial=0.0)
    if not nz.any():
        return r, s
    for _ in range(passes):
        S = absA * r[:, None] * s[None, :]
        big = np.where(nz, S, 0.0).max(axis=1, initial=0.0)
        small = np.where(nz, S, np.inf).min(axis=1, initial=np.inf)
        has = big > 0
        r[has] /= np.sqrt(big[has] * small[has])
        S = absA * r[:, None] * s[None, :]
        big = np.where(nz, S, 0.0).max(axis=0, initial=0.0)
        small = np.where(nz, S, np.inf).min(axis=0, initial=np.inf)
        has = big > 0
        s[has] /= np.sqrt(big[has] * small[has])
    # powers of two keep the scaling exact in floating point; the clamp stops a
    # stray tiny coefficient from dragging whole rows to extreme magnitudes
    return (np.exp2(np.clip(np.round(np.log2(r)), -max_exp, max_exp)),
            np.exp2(np.clip(np.round(np.log2(s)), -max_exp, max_exp)))


class _Simplex:
    def __init__(self, M, b, lower, upper, x, status, basis, *, tol_primal,
                 tol_dual, bland_after, max_iter, refactor_every=64):
        self.M, self.b = M, b
        self.lower, self.upper = lower, upper
        self.x, self.status = x, status
        self.basis = list(basis)
        self.tol_p, self.tol_d = tol_primal, tol_dual
        self.bland_after = bland_after
        self.max_iter = max_iter
        self.refactor_every = refactor_every
        self.iterations = 0
        self.is_basic = np.zeros(M.shape[1], dtype=bool)
        self.is_basic[self.basis] = True
        self._refactor()

    def _refactor(self):
        m = self.M.shape[0]
        if m == 0:
            self.Binv = np.zeros((0, 0))
            return
        B = self.M[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("singular basis during refactorization") from exc
        nb = ~self.is_basic
        rhs = self.b - self.M[:, nb] @ self.x[nb]
        self.x[self.basis] = self.Binv @ rhs

    def run(self, cost: np.ndarray) -> LpStatus:
        fixed = self.lower == self.upper
        streak = 0
        bland = False
        stall_budget = 10 * (self.M.shape[0] + self.M.shape[1]) + 1000
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iter:
                return LpStatus.ITER_LIMIT
            if since_refactor >= self.refactor_every:
                self._refactor()
                since_refactor = 0
            cb = cost[self.basis]
            y = cb @ self.Binv if self.basis else np.zeros(0)
            d = cost - y @ self.M
            elig = ~self.is_basic & ~fixed & (
                ((self.status == _AT_LO) & (d < -self.tol_d))
                | ((self.status == _AT_HI) & (d > self.tol_d))
                | ((self.status == _FREE) & (np.abs(d) > self.tol_d))
            )
            cand = np.flatnonzero(elig)
            if cand.size == 0:
                return LpStatus.OPTIMAL
            if bland:
                q = int(cand[0])
            else:
                q = int(cand[np.argmax(np.abs(d[cand]))])
            direction = 1.0 if d[q] < 0 else -1.0

            alpha = self.Binv @ self.M[:, q] if self.basis else np.zeros(0)
            # basic x changes by -direction * theta * alpha
            rate = -direction * alpha
            xb = self.x[self.basis]
            lb = self.lower[self.basis]
            ub = self.upper[self.basis]
            # Harris two-pass ratio test: bounds relaxed by tol_p pick the step,
            # then the largest pivot within that step leaves
            piv_tol = 1e-9 * max(1.0, float(np.abs(alpha).max(initial=0.0)))
            dec = rate < -piv_tol
            inc = rate > piv_tol
            limits = np.full(alpha.size, np.inf)
            relaxed = np.full(alpha.size, np.inf)
            with np.errstate(divide="ignore", invalid="ignore"):
                limits[dec] = (xb[dec] - lb[dec]) / -rate[dec]
                limits[inc] = (ub[inc] - xb[inc]) / rate[inc]
                relaxed[dec] = (xb[dec] - lb[dec] + self.tol_p) / -rate[dec]
                relaxed[inc] = (ub[inc] - xb[inc] + self.tol_p) / rate[inc]
            limits = np.where(np.isnan(limits), np.inf, np.maximum(limits, 0.0))
            relaxed = np.where(np.isnan(relaxed), np.inf, np.maximum(relaxed, 0.0))
            theta_flip = self.upper[q] - self.lower[q]
            theta = limits.min(initial=np.inf)
            cap = relaxed.min(initial=np.inf)

            if theta_flip <= theta:
                if not np.isfinite(theta_flip):
                    return LpStatus.UNBOUNDED
                self.x[q] += direction * theta_flip
                self.x[self.basis] = xb + rate * theta_flip
                self.status[q] = _AT_HI if direction > 0 else _AT_LO
                self.iterations += 1
                streak, bland = 0, False
                continue
            if not np.isfinite(theta):
                return LpStatus.UNBOUNDED

            if bland:
                ties = np.flatnonzero(limits <= theta + 1e-12)
                basis_arr = np.asarray(self.basis)
                i = int(ties[np.argmin(basis_arr[ties])])
            else:
                ties = np.flatnonzero(limits <= cap)
                i = int(ties[np.argmax(np.abs(alpha[ties]))])
                theta = limits[i]
            leaving = self.basis[i]

            self.x[q] += direction * theta
            self.x[self.basis] = xb + rate * theta
            if rate[i] < 0:
                self.x[leaving] = self.lower[leaving]
                self.status[leaving] = _AT_LO
            else:
                self.x[leaving] = self.upper[leaving]
                self.status[leaving] = _AT_HI

            piv = alpha[i]
            row = self.Binv[i] / piv
            self.Binv -= np.outer(alpha, row)
            self.Binv[i] = row
            self.basis[i] = q
            self.is_basic[q] = True
            self.is_basic[leaving] = False
            self.iterations += 1
            since_refactor += 1

            if theta <= 1e-12:
                streak += 1
                if streak >= self.bland_after:
                    bland = True
                if streak > self.bland_after + stall_budget:
                    raise NumericalFailure(
                        f"degenerate stall: {streak} consecutive degenerate pivots")
            else:
                streak, bland = 0, False


def solve_simplex(
    p: LpProblem,
    *,
    tol_primal: float = 1e-9,
    tol_dual: float = 1e-9,
    max_iter: int | None = None,
    bland_after: int = 50,
    scale: bool = True,
) -> LpSolution:
    """Solve ``p`` with the bundled two-phase bounded revised simplex."""
    A = p.A.toarray()
    m, n = A.shape
    if np.any(p.lo > p.hi):
        return LpSolution(LpStatus.INFEASIBLE, None, np.nan, 0, "bundled")
    if scale and m > 0:
        r, s = equilibrate(A)
    else:
        r, s = np.ones(m), np.ones(n)
    As = A * r[:, None] * s[None, :]
    b = p.rhs * r
    c = p.c * s
    lo = p.lo / s
    hi = p.hi / s

    slo = np.where(p.sense == "G", -np.inf, 0.0)
    shi = np.where(p.sense == "L", np.inf, 0.0)

    x = np.zeros(n + m)
    status = np.full(n + m, _AT_LO)
    xs = np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0))
    x[:n] = xs
    status[:n] = np.where(np.isfinite(lo), _AT_LO, np.where(np.isfinite(hi), _AT_HI, _FREE))
    resid = b - As @ xs

    basis = []
    art_rows, art_sign = [], []
    for i in range(m):
        t = resid[i]
        if slo[i] - 1e-12 <= t <= shi[i] + 1e-12:
            basis.append(n + i)
            x[n + i] = t
        else:
            v = min(max(t, slo[i]), shi[i])
            x[n + i] = v
            status[n + i] = _AT_LO if v == slo[i] else _AT_HI
            art_rows.append(i)
            art_sign.append(1.0 if t - v > 0 else -1.0)
    k = len(art_rows)
    M = np.zeros((m, n + m + k))
    M[:, :n] = As
    M[:, n:n + m] = np.eye(m)
    for a, (i, sg) in enumerate(zip(art_rows, art_sign)):
        M[i, n + m + a] = sg
    lower = np.concatenate([lo, slo, np.zeros(k)])
    upper = np.concatenate([hi, shi, np.full(k, np.inf)])
    x = np.concatenate([x, np.zeros(k)])
    status = np.concatenate([status, np.full(k, _AT_LO)])
    # each row's basic variable is its slack or its artificial
    basis_full = [None] * m
    slack_basic = {j - n for j in basis}
    for i in range(m):
        if i in slack_basic:
            basis_full[i] = n + i
    for a, i in enumerate(art_rows):
        basis_full[i] = n + m + a
    max_iter = max_iter if max_iter is not None else 50 * (m + n) + 1000

    sx = _Simplex(M, b, lower, upper, x, status, basis_full, tol_primal=tol_primal,
                  tol_dual=tol_dual, bland_after=bland_after, max_iter=max_iter)
    if k:
        cost1 = np.zeros(n + m + k)
        cost1[n + m:] = 1.0
        st = sx.run(cost1)
        if st is LpStatus.ITER_LIMIT:
            return LpSolution(st, None, np.nan, sx.iterations, "bundled")
        sx._refactor()
        infeas = float(sx.x[n + m:].sum())
        if infeas > tol_primal * max(1.0, float(np.abs(b).max(initial=0.0))) * 10:
            return LpSolution(LpStatus.INFEASIBLE, None, np.nan, sx.iterations, "bundled")
        sx.upper[n + m:] = 0.0
        sx.x[n + m:][~sx.is_basic[n + m:]] = 0.0
    cost2 = np.concatenate([c, np.zeros(m + k)])
    st = sx.run(cost2)
    sx._refactor()
    if st is not LpStatus.OPTIMAL:
        return LpSolution(st, None, np.nan, sx.iterations, "bundled")
    xs = sx.x[:n] * s
    # snap to bounds swept by rounding in the unscaling step
    xs = np.minimum(np.maximum(xs, p.lo), p.hi)
    return LpSolution(LpStatus.OPTIMAL, xs, p.objective(xs), sx.iterations, "bundled")
