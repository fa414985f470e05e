"""Compact JSON format for MILFP instances.

::

    {
      "numerator":   {"constant": 1.0, "terms": {"x": 2.0, "n": -1.0}},
      "denominator": {"constant": 1.0, "terms": {"x": 1.0}},
      "rows": [{"terms": {"x": 1.0, "n": 2.0}, "sense": "<=", "rhs": 4.0}],
      "bounds": {"x": [0, 3], "n": [0, 5]},
      "integers": ["n"]
    }

``bounds`` lists every variable; its key order fixes the column order within
the continuous and integer groups. Senses are ``"<="``, ``">="`` or ``"="``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError
from ..lp.problem import normalize_sense
from .problem import MilfpProblem


def problem_from_dict(d: dict) -> MilfpProblem:
    try:
        bounds = d["bounds"]
        ints = set(d.get("integers", []))
        num, den = d["numerator"], d["denominator"]
    except KeyError as exc:
        raise ConfigError(f"MILFP JSON missing key {exc}") from None
    unknown = ints - set(bounds)
    if unknown:
        raise ConfigError(f"integer variables without bounds: {sorted(unknown)}")
    xs = [v for v in bounds if v not in ints]
    ys = [v for v in bounds if v in ints]
    col = {v: ("x", i) for i, v in enumerate(xs)}
    col.update({v: ("y", j) for j, v in enumerate(ys)})

    def linear(expr):
        a1, a2 = np.zeros(len(xs)), np.zeros(len(ys))
        for name, coef in expr.get("terms", {}).items():
            if name not in col:
                raise ConfigError(f"unknown variable {name!r}")
            side, k = col[name]
            (a1 if side == "x" else a2)[k] += float(coef)
        return float(expr.get("constant", 0.0)), a1, a2

    p0, p1, p2 = linear(num)
    q0, q1, q2 = linear(den)
    ub1, ub2, ub_b, eq1, eq2, eq_b = [], [], [], [], [], []
    for r in d.get("rows", []):
        _, a1, a2 = linear(r)
        s, b = normalize_sense(r["sense"]), float(r["rhs"])
        if s == "E":
            eq1.append(a1), eq2.append(a2), eq_b.append(b)
        elif s == "L":
            ub1.append(a1), ub2.append(a2), ub_b.append(b)
        else:
            ub1.append(-a1), ub2.append(-a2), ub_b.append(-b)

    def stack(rows, n):
        return sp.csr_matrix(np.array(rows).reshape(len(rows), n))

    def bnd(names, k):
        return np.array([float(bounds[v][k]) if bounds[v][k] is not None
                         else (-np.inf if k == 0 else np.inf) for v in names])

    return MilfpProblem(
        p0, p1, p2, q0, q1, q2,
        stack(ub1, len(xs)), stack(ub2, len(ys)), np.array(ub_b),
        bnd(xs, 0), bnd(xs, 1), bnd(ys, 0), bnd(ys, 1),
        E1=stack(eq1, len(xs)), E2=stack(eq2, len(ys)), Beq=np.array(eq_b),
        x_names=xs, y_names=ys,
    )


def problem_to_dict(prob: MilfpProblem) -> dict:
    xs = prob.x_names or [f"x{i}" for i in range(prob.n_x)]
    ys = prob.y_names or [f"y{j}" for j in range(prob.n_y)]

    def terms(a1, a2):
        out = {}
        for name, v in zip(xs, np.asarray(a1).ravel()):
            if v != 0.0:
                out[name] = float(v)
        for name, v in zip(ys, np.asarray(a2).ravel()):
            if v != 0.0:
                out[name] = float(v)
        return out

    def fnum(v):
        return None if not np.isfinite(v) else float(v)

    rows = []
    A1, A2 = prob.A1.toarray(), prob.A2.toarray()
    for i in range(prob.B.size):
        rows.append({"terms": terms(A1[i], A2[i]), "sense": "<=", "rhs": float(prob.B[i])})
    E1, E2 = prob.E1.toarray(), prob.E2.toarray()
    for i in range(prob.Beq.size):
        rows.append({"terms": terms(E1[i], E2[i]), "sense": "=", "rhs": float(prob.Beq[i])})
    bounds = {n: [fnum(lo), fnum(hi)] for n, lo, hi in zip(xs, prob.x_lo, prob.x_hi)}
    bounds.update({n: [fnum(lo), fnum(hi)] for n, lo, hi in zip(ys, prob.y_lo, prob.y_hi)})
    return {
        "numerator": {"constant": prob.p0, "terms": terms(prob.p1, prob.p2)},
        "denominator": {"constant": prob.q0, "terms": terms(prob.q1, prob.q2)},
        "rows": rows,
        "bounds": bounds,
        "integers": list(ys),
    }


def load_problem(path: str | Path) -> MilfpProblem:
    return problem_from_dict(json.loads(Path(path).read_text()))


def dump_problem(prob: MilfpProblem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(prob), indent=2))
