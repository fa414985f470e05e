"""Hand LPs to an external solver through MPS files.

The configured command is a template; ``{mps}`` and ``{sol}`` are replaced
with the input and output paths, e.g. ``"mysolver --in {mps} --out {sol}"``.

Solution file format, one ``key value`` pair per line::

    status optimal          # optimal | infeasible | unbounded | iterlimit
    objective -1.5          # optional; recomputed from the primal anyway
    iterations 12           # optional
    C0000001 1.0            # column name (as written in the MPS) and value
    C0000002 0.5

Columns that are not listed are taken as zero. Blank lines and lines starting
with ``#`` are ignored.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
from pathlib import Path

import numpy as np

from ..errors import ConfigError, DataError, NumericalFailure
from .mps import _col, export_mps
from .problem import LpProblem, LpSolution, LpStatus

_STATUS = {
    "optimal": LpStatus.OPTIMAL,
    "infeasible": LpStatus.INFEASIBLE,
    "unbounded": LpStatus.UNBOUNDED,
    "iterlimit": LpStatus.ITER_LIMIT,
}


def parse_solution(text: str, p: LpProblem) -> LpSolution:
    index = {_col(j): j for j in range(p.n_cols)}
    x = np.zeros(p.n_cols)
    status = None
    iterations = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"solution line {lineno}: expected 'key value', got {raw!r}")
        key, val = parts
        if key.lower() == "status":
            try:
                status = _STATUS[val.lower()]
            except KeyError:
                raise DataError(f"unknown solver status {val!r}") from None
        elif key.lower() == "objective":
            continue
        elif key.lower() == "iterations":
            iterations = int(val)
        elif key in index:
            x[index[key]] = float(val)
        else:
            raise DataError(f"solution line {lineno}: unknown column {key!r}")
    if status is None:
        raise DataError("solution file has no status line")
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, None, np.nan, iterations, "mps-shellout")
    return LpSolution(status, x, p.objective(x), iterations, "mps-shellout")


def solve_shellout(p: LpProblem, command: str | None, timeout: float | None = None) -> LpSolution:
    if not command:
        raise ConfigError("mps-shellout backend needs a solver command template")
    with tempfile.TemporaryDirectory(prefix="irepta-lp-") as tmp:
        mps_path = Path(tmp) / "problem.mps"
        sol_path = Path(tmp) / "problem.sol"
        mps_path.write_bytes(export_mps(p))
        argv = [a.format(mps=str(mps_path), sol=str(sol_path)) for a in shlex.split(command)]
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        if proc.returncode != 0:
            raise NumericalFailure(
                f"external solver exited with {proc.returncode}: {proc.stderr.strip()[:500]}")
        if not sol_path.exists():
            raise DataError("external solver did not write a solution file")
        return parse_solution(sol_path.read_text(), p)
