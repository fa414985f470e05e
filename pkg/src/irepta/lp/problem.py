"""LP problem and solution containers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError

SENSES = ("L", "E", "G")
_SENSE_ALIASES = {
    "L": "L", "<=": "L", "<": "L", "≤": "L",
    "E": "E", "=": "E", "==": "E",
    "G": "G", ">=": "G", ">": "G", "≥": "G",
}


def normalize_sense(s: str) -> str:
    key = str(s).strip()
    try:
        return _SENSE_ALIASES[key.upper() if key.isalpha() else key]
    except KeyError:
        raise ConfigError(f"unknown row sense {s!r}") from None


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITER_LIMIT = "IterLimit"


@dataclass
class LpProblem:
    """``min c·x + offset`` s.t. ``A x (sense) rhs``, ``lo <= x <= hi``.

    ``sense`` holds one of ``'L'``, ``'E'``, ``'G'`` per row. Bounds may be
    infinite; coefficients may not.
    """

    c: np.ndarray
    A: sp.csr_matrix
    sense: np.ndarray
    rhs: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    offset: float = 0.0
    col_names: list[str] | None = None
    row_names: list[str] | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        if self.A is None:
            self.A = sp.csr_matrix((0, n))
        self.A = sp.csr_matrix(self.A, dtype=float)
        sense = np.asarray(self.sense)
        if sense.dtype.kind == "U" and np.isin(sense, SENSES).all():
            self.sense = sense.astype("<U1")
        else:
            self.sense = np.array([normalize_sense(s) for s in sense], dtype="<U1")
        self.rhs = np.asarray(self.rhs, dtype=float).ravel()
        self.lo = np.asarray(self.lo, dtype=float).ravel()
        self.hi = np.asarray(self.hi, dtype=float).ravel()
        self.validate()

    @property
    def n_cols(self) -> int:
        return self.c.size

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def validate(self) -> None:
        n, m = self.n_cols, self.A.shape[0]
        if self.A.shape[1] != n:
            raise ConfigError(f"A has {self.A.shape[1]} columns, expected {n}")
        if self.sense.size != m or self.rhs.size != m:
            raise ConfigError("sense/rhs length must equal the number of rows")
        if self.lo.size != n or self.hi.size != n:
            raise ConfigError("bound vectors must match the number of columns")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.A.data))
                and np.all(np.isfinite(self.rhs))):
            raise ConfigError("NaN/Inf in objective, matrix or right-hand side")
        if np.any(np.isnan(self.lo)) or np.any(np.isnan(self.hi)):
            raise ConfigError("NaN in bounds")
        if np.any(self.lo == np.inf) or np.any(self.hi == -np.inf):
            raise ConfigError("lower bound +inf or upper bound -inf")
        if not np.isfinite(self.offset):
            raise ConfigError("objective offset must be finite")

    @classmethod
    def from_rows(
        cls,
        c: Sequence[float],
        rows: Iterable[tuple[Mapping[int, float], str, float]],
        lo: Sequence[float] | None = None,
        hi: Sequence[float] | None = None,
        offset: float = 0.0,
    ) -> "LpProblem":
        """Build from ``(coeffs, sense, rhs)`` triples with sparse dict coeffs.

        Default bounds are ``[0, +inf)``.
        """
        c = np.asarray(c, dtype=float)
        n = c.size
        data, ri, ci, senses, rhs = [], [], [], [], []
        for i, (coeffs, s, b) in enumerate(rows):
            for j, v in coeffs.items():
                if not 0 <= j < n:
                    raise ConfigError(f"row {i}: column index {j} out of range")
                ri.append(i)
                ci.append(j)
                data.append(v)
            senses.append(s)
            rhs.append(b)
        A = sp.csr_matrix((data, (ri, ci)), shape=(len(rhs), n))
        lo = np.zeros(n) if lo is None else lo
        hi = np.full(n, np.inf) if hi is None else hi
        return cls(c, A, np.array(senses, dtype=object), np.array(rhs), lo, hi, offset)

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x + self.offset)

    def residuals(self, x: np.ndarray) -> tuple[float, float]:
        """Max row violation and max bound violation at ``x``."""
        ax = self.A @ x
        viol = np.zeros(self.n_rows)
        L, E, G = self.sense == "L", self.sense == "E", self.sense == "G"
        viol[L] = np.maximum(ax[L] - self.rhs[L], 0.0)
        viol[G] = np.maximum(self.rhs[G] - ax[G], 0.0)
        viol[E] = np.abs(ax[E] - self.rhs[E])
        bviol = np.maximum(np.maximum(self.lo - x, x - self.hi), 0.0)
        return (float(viol.max(initial=0.0)), float(bviol.max(initial=0.0)))

    def with_rows(self, A_extra: sp.spmatrix, sense: Sequence[str],
                  rhs: Sequence[float]) -> "LpProblem":
        """Copy of this problem with extra rows appended."""
        if A_extra.shape[0] == 0:
            return self
        return LpProblem(
            self.c, sp.vstack([self.A, A_extra], format="csr"),
            np.concatenate([self.sense, np.asarray(sense, dtype="<U1")]),
            np.concatenate([self.rhs, np.asarray(rhs, dtype=float)]),
            self.lo, self.hi, self.offset, self.col_names, None,
        )


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray | None
    objective: float
    iterations: int = 0
    backend: str = ""
    info: dict = field(default_factory=dict)

    @property
    def primal(self) -> np.ndarray | None:
        return self.x

    @property
    def ok(self) -> bool:
        return self.status is LpStatus.OPTIMAL
