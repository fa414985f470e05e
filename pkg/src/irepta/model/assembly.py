"""Column/row bookkeeping for building large sparse models from numpy arrays."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError
from ..milfp.problem import MilfpProblem


class ModelAssembler:
    """Accumulates named columns and vectorized row blocks.

    ``add_rows`` takes a list of ``(columns, coefficients)`` term pairs where
    both entries broadcast to the block length ``k``; row ``r`` of the block
    is ``sum_i coef_i[r] * col_i[r]``. Duplicate column entries in a row add
    up, which is what the sparse COO conversion does anyway.
    """

    def __init__(self):
        self.names: list[str] = []
        self.lo: list[np.ndarray] = []
        self.hi: list[np.ndarray] = []
        self.integer: list[np.ndarray] = []
        self.index: dict[str, np.ndarray] = {}
        self.n = 0
        self._r, self._c, self._v = [], [], []
        self._sense: list[np.ndarray] = []
        self._rhs: list[np.ndarray] = []
        self.m = 0
        self.row_blocks: dict[str, slice] = {}

    def var(self, name: str, lo, hi, size: int | None = None, integer: bool = False) -> np.ndarray:
        if name in self.index:
            raise ConfigError(f"duplicate variable {name}")
        k = 1 if size is None else int(size)
        cols = np.arange(self.n, self.n + k)
        lo_v = np.broadcast_to(np.asarray(lo, dtype=float), (k,)).copy()
        hi_v = np.broadcast_to(np.asarray(hi, dtype=float), (k,)).copy()
        if np.any(lo_v > hi_v):
            raise ConfigError(f"empty bounds for {name}")
        self.lo.append(lo_v)
        self.hi.append(hi_v)
        self.integer.append(np.full(k, integer))
        self.names.extend([name] if size is None else [f"{name}[{i}]" for i in range(k)])
        self.n += k
        self.index[name] = cols
        return cols

    def set_integer(self, name: str, flag: bool) -> None:
        cols = self.index[name]
        flat = np.concatenate(self.integer)
        flat[cols] = flag
        self.integer = [flat]

    def add_rows(self, name: str, terms, sense: str, rhs, k: int | None = None) -> slice:
        if k is None:
            k = max(np.size(c) for c, _ in terms)
        rows = np.arange(self.m, self.m + k)
        for cols, coef in terms:
            cols = np.broadcast_to(np.asarray(cols, dtype=np.int64), (k,))
            coef = np.broadcast_to(np.asarray(coef, dtype=float), (k,))
            self._r.append(rows)
            self._c.append(cols)
            self._v.append(coef)
        self._sense.append(np.full(k, sense, dtype="<U1"))
        self._rhs.append(np.broadcast_to(np.asarray(rhs, dtype=float), (k,)).copy())
        block = slice(self.m, self.m + k)
        self.row_blocks[name] = block
        self.m += k
        return block

    def add_row(self, name: str, cols, coefs, sense: str, rhs: float) -> int:
        """One row with arbitrarily many entries."""
        cols = np.asarray(cols, dtype=np.int64).ravel()
        coefs = np.broadcast_to(np.asarray(coefs, dtype=float), cols.shape)
        self._r.append(np.full(cols.size, self.m))
        self._c.append(cols)
        self._v.append(coefs)
        self._sense.append(np.array([sense], dtype="<U1"))
        self._rhs.append(np.array([float(rhs)]))
        self.row_blocks[name] = slice(self.m, self.m + 1)
        self.m += 1
        return self.m - 1

    def bounds(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (np.concatenate(self.lo), np.concatenate(self.hi), np.concatenate(self.integer))

    def matrix(self) -> sp.csr_matrix:
        if not self._r:
            return sp.csr_matrix((0, self.n))
        r = np.concatenate(self._r)
        c = np.concatenate(self._c)
        v = np.concatenate(self._v)
        keep = v != 0.0
        A = sp.coo_matrix((v[keep], (r[keep], c[keep])), shape=(self.m, self.n)).tocsr()
        A.sum_duplicates()
        A.eliminate_zeros()
        return A

    def to_milfp(self, p0: float, p: np.ndarray, q0: float, q: np.ndarray
                 ) -> tuple[MilfpProblem, np.ndarray, np.ndarray]:
        """Split columns into continuous ``x`` and integer ``y`` and emit a MilfpProblem.

        ``G`` rows are negated into ``<=`` rows. Returns the problem with the
        model column index of every x and y entry.
        """
        lo, hi, is_int = self.bounds()
        A = self.matrix()
        sense = np.concatenate(self._sense) if self._sense else np.zeros(0, "<U1")
        rhs = np.concatenate(self._rhs) if self._rhs else np.zeros(0)
        sign = np.where(sense == "G", -1.0, 1.0)
        A = sp.diags(sign) @ A
        rhs = rhs * sign
        ub = np.flatnonzero(sense != "E")
        eq = np.flatnonzero(sense == "E")
        xc = np.flatnonzero(~is_int)
        yc = np.flatnonzero(is_int)
        A = A.tocsc()
        Aub, Aeq = A[ub].tocsc(), A[eq].tocsc()
        names = np.array(self.names, dtype=object)
        prob = MilfpProblem(
            float(p0), p[xc], p[yc], float(q0), q[xc], q[yc],
            Aub[:, xc].tocsr(), Aub[:, yc].tocsr(), rhs[ub],
            lo[xc], hi[xc], lo[yc], hi[yc],
            E1=Aeq[:, xc].tocsr(), E2=Aeq[:, yc].tocsr(), Beq=rhs[eq],
            x_names=list(names[xc]), y_names=list(names[yc]),
        )
        return prob, xc, yc

    def row_senses(self) -> np.ndarray:
        return np.concatenate(self._sense)

    def row_rhs(self) -> np.ndarray:
        return np.concatenate(self._rhs)
