"""Mixed-integer linear fractional programs and their continuous relaxation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError


def _vec(v, n=None, name="vector"):
    a = np.asarray(v if v is not None else np.zeros(n or 0), dtype=float).ravel()
    if n is not None and a.size != n:
        raise ConfigError(f"{name} has length {a.size}, expected {n}")
    return a


def _mat(M, m, n, name):
    if M is None:
        return sp.csr_matrix((m, n))
    M = sp.csr_matrix(M, dtype=float)
    if M.shape != (m, n):
        raise ConfigError(f"{name} has shape {M.shape}, expected {(m, n)}")
    return M


@dataclass
class MilfpProblem:
    """``min (p0 + p1·x + p2·y) / (q0 + q1·x + q2·y)``.

    Subject to ``A1 x + A2 y <= B``, optional equalities ``E1 x + E2 y = Beq``,
    finite box bounds on ``x`` (continuous) and ``y`` (integer), and a
    positive denominator. Equalities are a convenience; each is equivalent to
    a pair of opposite inequalities.
    """

    p0: float
    p1: np.ndarray
    p2: np.ndarray
    q0: float
    q1: np.ndarray
    q2: np.ndarray
    A1: sp.csr_matrix
    A2: sp.csr_matrix
    B: np.ndarray
    x_lo: np.ndarray
    x_hi: np.ndarray
    y_lo: np.ndarray
    y_hi: np.ndarray
    E1: sp.csr_matrix | None = None
    E2: sp.csr_matrix | None = None
    Beq: np.ndarray | None = None
    x_names: list[str] | None = None
    y_names: list[str] | None = None

    def __post_init__(self):
        self.x_lo = _vec(self.x_lo, name="x_lo")
        self.y_lo = _vec(self.y_lo, name="y_lo")
        nI, nJ = self.x_lo.size, self.y_lo.size
        self.x_hi = _vec(self.x_hi, nI, "x_hi")
        self.y_hi = _vec(self.y_hi, nJ, "y_hi")
        self.p1 = _vec(self.p1, nI, "p1")
        self.q1 = _vec(self.q1, nI, "q1")
        self.p2 = _vec(self.p2, nJ, "p2")
        self.q2 = _vec(self.q2, nJ, "q2")
        self.p0, self.q0 = float(self.p0), float(self.q0)
        self.B = _vec(self.B, name="B")
        m = self.B.size
        self.A1 = _mat(self.A1, m, nI, "A1")
        self.A2 = _mat(self.A2, m, nJ, "A2")
        self.Beq = _vec(self.Beq, name="Beq") if self.Beq is not None else np.zeros(0)
        me = self.Beq.size
        self.E1 = _mat(self.E1, me, nI, "E1")
        self.E2 = _mat(self.E2, me, nJ, "E2")
        if self.x_names is not None and len(self.x_names) != nI:
            raise ConfigError("x_names length mismatch")
        if self.y_names is not None and len(self.y_names) != nJ:
            raise ConfigError("y_names length mismatch")
        if np.any(self.x_lo > self.x_hi) or np.any(self.y_lo > self.y_hi):
            raise ConfigError("lower bound above upper bound")
        if np.any(np.isnan(self.x_lo)) or np.any(np.isnan(self.y_lo)):
            raise ConfigError("NaN bound")

    @property
    def n_x(self) -> int:
        return self.x_lo.size

    @property
    def n_y(self) -> int:
        return self.y_lo.size

    @property
    def bounded(self) -> bool:
        return bool(np.all(np.isfinite(np.concatenate(
            [self.x_lo, self.x_hi, self.y_lo, self.y_hi]))))

    def numerator(self, x, y) -> float:
        return float(self.p0 + self.p1 @ x + self.p2 @ y)

    def denominator(self, x, y) -> float:
        return float(self.q0 + self.q1 @ x + self.q2 @ y)

    def ratio(self, x, y) -> float:
        return self.numerator(x, y) / self.denominator(x, y)


@dataclass
class LfpProblem:
    """Continuous relaxation over ``v = [x, y]``; the first ``n_x`` entries of
    ``v`` are the originally continuous variables."""

    p0: float
    p: np.ndarray
    q0: float
    q: np.ndarray
    A_ub: sp.csr_matrix
    b_ub: np.ndarray
    A_eq: sp.csr_matrix
    b_eq: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    n_x: int = -1
    names: list[str] | None = None
    eps_den: float = 1e-9
    integer_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        self.p = _vec(self.p, name="p")
        n = self.p.size
        self.q = _vec(self.q, n, "q")
        self.lo = _vec(self.lo, n, "lo")
        self.hi = _vec(self.hi, n, "hi")
        self.b_ub = _vec(self.b_ub, name="b_ub")
        self.b_eq = _vec(self.b_eq, name="b_eq")
        self.A_ub = _mat(self.A_ub, self.b_ub.size, n, "A_ub")
        self.A_eq = _mat(self.A_eq, self.b_eq.size, n, "A_eq")
        self.p0, self.q0 = float(self.p0), float(self.q0)
        if self.n_x < 0:
            self.n_x = n
        if self.integer_mask is None:
            self.integer_mask = np.zeros(n, dtype=bool)

    @property
    def n(self) -> int:
        return self.p.size

    def numerator(self, v) -> float:
        return float(self.p0 + self.p @ v)

    def denominator(self, v) -> float:
        return float(self.q0 + self.q @ v)

    def ratio(self, v) -> float:
        return self.numerator(v) / self.denominator(v)


def relax(prob: MilfpProblem) -> LfpProblem:
    """Drop integrality of ``y``; coefficients and bounds are carried over as is."""
    names = None
    if prob.x_names is not None or prob.y_names is not None:
        names = list(prob.x_names or [f"x{i}" for i in range(prob.n_x)]) + \
            list(prob.y_names or [f"y{j}" for j in range(prob.n_y)])
    mask = np.zeros(prob.n_x + prob.n_y, dtype=bool)
    mask[prob.n_x:] = True
    return LfpProblem(
        p0=prob.p0,
        p=np.concatenate([prob.p1, prob.p2]),
        q0=prob.q0,
        q=np.concatenate([prob.q1, prob.q2]),
        A_ub=sp.hstack([prob.A1, prob.A2], format="csr"),
        b_ub=prob.B.copy(),
        A_eq=sp.hstack([prob.E1, prob.E2], format="csr"),
        b_eq=prob.Beq.copy(),
        lo=np.concatenate([prob.x_lo, prob.y_lo]),
        hi=np.concatenate([prob.x_hi, prob.y_hi]),
        n_x=prob.n_x,
        names=names,
        integer_mask=mask,
    )
