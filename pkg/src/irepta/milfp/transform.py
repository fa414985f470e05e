"""Charnes-Cooper transformation of a linear fractional program into an LP."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError, DegenerateScale
from ..lp import LpProblem, LpSolution
from .problem import LfpProblem

U_MIN = 1e-10


@dataclass
class CcLpProblem:
    """Homogenized LP over ``[z, u]`` with ``z = u·(v - shift)``, ``u = 1/denominator``.

    Rows of ``lp``, in order: homogenized inequalities, homogenized
    equalities, the single normalization row (``q0 u + q·z = 1``), then the
    homogenized bound rows. Branching rows are appended per node.
    """

    lp: LpProblem
    shift: np.ndarray
    n: int
    n_x: int
    norm_row: int
    lfp: LfpProblem

    @property
    def u_index(self) -> int:
        return self.n

    def branch_rows(self, rows: list[tuple[int, str, int]]) -> tuple[sp.csr_matrix, list[str]]:
        """Rows ``w_j >= k·u`` (``'G'``) or ``w_j <= k·u`` (``'L'``).

        ``j`` indexes the integer variables (0-based within ``y``); ``k`` is in
        the original, unshifted ``y`` scale.
        """
        data, ri, ci, senses = [], [], [], []
        for r, (j, s, k) in enumerate(rows):
            col = self.n_x + j
            ri += [r, r]
            ci += [col, self.n]
            data += [1.0, -(float(k) - self.shift[col])]
            senses.append(s)
        A = sp.csr_matrix((data, (ri, ci)), shape=(len(rows), self.n + 1))
        return A, senses

    def node_lp(self, rows: list[tuple[int, str, int]]) -> LpProblem:
        if not rows:
            return self.lp
        A, senses = self.branch_rows(rows)
        return self.lp.with_rows(A, senses, np.zeros(len(rows)))


def charnes_cooper_transform(lfp: LfpProblem) -> CcLpProblem:
    """Build the equivalent LP of a bounded LFP.

    Variables with a negative lower bound are shifted to start at zero first,
    so every transformed variable is nonnegative. All bounds must be finite:
    each one becomes a homogenized row ``lo·u <= z <= hi·u``.
    """
    if not (np.all(np.isfinite(lfp.lo)) and np.all(np.isfinite(lfp.hi))):
        raise ConfigError("Charnes-Cooper transform needs finite bounds on every variable")
    n = lfp.n
    shift = np.where(lfp.lo < 0, lfp.lo, 0.0)
    lo = lfp.lo - shift
    hi = lfp.hi - shift
    p0 = lfp.p0 + lfp.p @ shift
    q0 = lfp.q0 + lfp.q @ shift
    b_ub = lfp.b_ub - lfp.A_ub @ shift
    b_eq = lfp.b_eq - lfp.A_eq @ shift

    blocks, senses, rhs = [], [], []
    if lfp.A_ub.shape[0]:
        blocks.append(sp.hstack([lfp.A_ub, sp.csr_matrix(-b_ub[:, None])]))
        senses += ["L"] * lfp.A_ub.shape[0]
    if lfp.A_eq.shape[0]:
        blocks.append(sp.hstack([lfp.A_eq, sp.csr_matrix(-b_eq[:, None])]))
        senses += ["E"] * lfp.A_eq.shape[0]
    rhs += [0.0] * len(senses)
    norm_row = len(senses)
    blocks.append(sp.csr_matrix(np.concatenate([lfp.q, [q0]])[None, :]))
    senses.append("E")
    rhs.append(1.0)

    eye = sp.identity(n, format="csr")
    # z_i - hi_i u <= 0
    blocks.append(sp.hstack([eye, sp.csr_matrix(-hi[:, None])]))
    senses += ["L"] * n
    rhs += [0.0] * n
    pos = np.flatnonzero(lo > 0)
    if pos.size:
        # lo_i u - z_i <= 0
        sel = eye[pos]
        blocks.append(sp.hstack([-sel, sp.csr_matrix(lo[pos][:, None])]))
        senses += ["L"] * pos.size
        rhs += [0.0] * pos.size

    A = sp.vstack(blocks, format="csr")
    A.eliminate_zeros()
    c = np.concatenate([lfp.p, [p0]])
    lp = LpProblem(c, A, np.array(senses, dtype="<U1"), np.array(rhs), np.zeros(n + 1),
                   np.full(n + 1, np.inf))
    return CcLpProblem(lp=lp, shift=shift, n=n, n_x=lfp.n_x, norm_row=norm_row, lfp=lfp)


def recover_solution(cc_sol: LpSolution | np.ndarray, prob: CcLpProblem,
                     u_min: float = U_MIN) -> tuple[np.ndarray, np.ndarray]:
    """Map an optimal ``[z, u]`` back to ``(x, y_relaxed)`` via ``v = z/u``."""
    zu = cc_sol.x if isinstance(cc_sol, LpSolution) else np.asarray(cc_sol, dtype=float)
    u = float(zu[prob.n])
    if not u > u_min:
        raise DegenerateScale(f"scale variable u={u:g} at or below u_min={u_min:g}")
    v = zu[:prob.n] / u + prob.shift
    return v[:prob.n_x], v[prob.n_x:]
