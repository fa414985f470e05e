"""Fixed-format MPS writer and reader for :class:`LpProblem`.

Names are generated (``C0000001``, ``R0000001``) so they always fit the
8-character name fields. Numbers are written with ``repr`` so a round trip is
bit-exact; long values can spill past the 12-character numeric field, which
is why the reader tokenizes on whitespace instead of column positions.

The objective constant is stored as the negated RHS of the objective row,
the usual convention.
"""

from __future__ import annotations

import io

import numpy as np
import scipy.sparse as sp

from ..errors import DataError
from .problem import LpProblem

_OBJ = "OBJ"


def _col(j: int) -> str:
    return f"C{j + 1:07d}"


def _row(i: int) -> str:
    return f"R{i + 1:07d}"


def _num(v: float) -> str:
    v = float(v)
    return repr(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def _line(code: str, name1: str, name2: str = "", value: float | None = None) -> str:
    # field 1 at col 2, name fields at cols 5 and 15, number at col 25
    s = f" {code:<2} {name1:<8}"
    if name2:
        s += f"  {name2:<8}"
        if value is not None:
            s += f"  {_num(value)}"
    elif value is not None:
        s += f"  {'':<8}  {_num(value)}"
    return s.rstrip()


def export_mps(p: LpProblem, name: str = "LP") -> bytes:
    out = io.StringIO()
    out.write(f"NAME          {name}\n")
    out.write("ROWS\n")
    out.write(_line("N", _OBJ) + "\n")
    for i, s in enumerate(p.sense):
        out.write(_line(s, _row(i)) + "\n")
    out.write("COLUMNS\n")
    At = sp.csc_matrix(p.A)
    for j in range(p.n_cols):
        col = _col(j)
        wrote = False
        if p.c[j] != 0.0:
            out.write(_line("", col, _OBJ, p.c[j]) + "\n")
            wrote = True
        start, end = At.indptr[j], At.indptr[j + 1]
        for k in range(start, end):
            out.write(_line("", col, _row(int(At.indices[k])), At.data[k]) + "\n")
            wrote = True
        if not wrote:
            out.write(_line("", col, _OBJ, 0.0) + "\n")
    out.write("RHS\n")
    if p.offset != 0.0:
        out.write(_line("", "RHS", _OBJ, -p.offset) + "\n")
    for i, b in enumerate(p.rhs):
        if b != 0.0:
            out.write(_line("", "RHS", _row(i), b) + "\n")
    out.write("BOUNDS\n")
    for j in range(p.n_cols):
        lo, hi, col = p.lo[j], p.hi[j], _col(j)
        if lo == hi:
            out.write(_line("FX", "BND", col, lo) + "\n")
            continue
        if lo == -np.inf and hi == np.inf:
            out.write(_line("FR", "BND", col) + "\n")
            continue
        if lo == -np.inf:
            out.write(_line("MI", "BND", col) + "\n")
        elif lo != 0.0:
            out.write(_line("LO", "BND", col, lo) + "\n")
        if hi != np.inf:
            out.write(_line("UP", "BND", col, hi) + "\n")
    out.write("ENDATA\n")
    return out.getvalue().encode("ascii")


def import_mps(data: bytes | str) -> LpProblem:
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    section = None
    obj_name = None
    row_index: dict[str, int] = {}
    senses: list[str] = []
    col_index: dict[str, int] = {}
    entries: list[tuple[int, int, float]] = []
    cost: dict[int, float] = {}
    rhs: dict[int, float] = {}
    offset = 0.0
    bounds: list[tuple[str, str, float | None]] = []

    def col_of(name: str) -> int:
        if name not in col_index:
            col_index[name] = len(col_index)
        return col_index[name]

    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw[0].isspace():
            section = raw.split()[0].upper()
            if section == "ENDATA":
                break
            continue
        tok = raw.split()
        try:
            if section == "ROWS":
                kind, rname = tok[0].upper(), tok[1]
                if kind == "N":
                    if obj_name is None:
                        obj_name = rname
                    continue
                row_index[rname] = len(senses)
                senses.append(kind)
            elif section == "COLUMNS":
                if "MARKER" in (t.strip("'").upper() for t in tok):
                    continue
                j = col_of(tok[0])
                for rname, val in zip(tok[1::2], tok[2::2]):
                    v = float(val)
                    if rname == obj_name:
                        cost[j] = cost.get(j, 0.0) + v
                    else:
                        entries.append((row_index[rname], j, v))
            elif section == "RHS":
                pairs = tok[1:] if len(tok) % 2 == 1 else tok
                for rname, val in zip(pairs[0::2], pairs[1::2]):
                    if rname == obj_name:
                        offset = -float(val)
                    else:
                        rhs[row_index[rname]] = float(val)
            elif section == "BOUNDS":
                kind = tok[0].upper()
                if kind in ("FR", "MI", "PL", "BV"):
                    bounds.append((kind, tok[2] if len(tok) > 2 else tok[1], None))
                else:
                    bounds.append((kind, tok[2], float(tok[3])))
            elif section in ("RANGES",):
                raise DataError("RANGES section is not supported")
        except (IndexError, KeyError, ValueError) as exc:
            raise DataError(f"MPS line {lineno}: cannot parse {raw!r}") from exc

    n, m = len(col_index), len(senses)
    lo, hi = np.zeros(n), np.full(n, np.inf)
    for kind, cname, val in bounds:
        j = col_index[cname]
        if kind == "UP":
            hi[j] = val
        elif kind == "LO":
            lo[j] = val
        elif kind == "FX":
            lo[j] = hi[j] = val
        elif kind == "FR":
            lo[j], hi[j] = -np.inf, np.inf
        elif kind == "MI":
            lo[j] = -np.inf
        elif kind == "PL":
            hi[j] = np.inf
        elif kind == "BV":
            lo[j], hi[j] = 0.0, 1.0
        else:
            raise DataError(f"unsupported bound type {kind}")
    c = np.zeros(n)
    for j, v in cost.items():
        c[j] = v
    if entries:
        ri, ci, vals = zip(*entries)
    else:
        ri, ci, vals = (), (), ()
    A = sp.csr_matrix((vals, (ri, ci)), shape=(m, n))
    b = np.zeros(m)
    for i, v in rhs.items():
        b[i] = v
    names = sorted(col_index, key=col_index.get)
    return LpProblem(c, A, np.array(senses, dtype="<U1"), b, lo, hi, offset,
                     col_names=names)
