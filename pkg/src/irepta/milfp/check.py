from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import MilfpProblem


@dataclass
class FeasibilityReport:
    max_row_violation: float
    max_bound_violation: float
    max_integrality_violation: float
    denominator: float
    objective: float
    tol: float

    @property
    def ok(self) -> bool:
        return (self.max_row_violation <= self.tol
                and self.max_bound_violation <= self.tol
                and self.max_integrality_violation <= self.tol
                and self.denominator > 0)


def check_solution(prob: MilfpProblem, x, y, tol: float = 1e-6) -> FeasibilityReport:
    """Recompute violations and the objective of ``(x, y)``; never raises on
    infeasibility, the report carries it."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rows = 0.0
    if prob.B.size:
        rows = float(np.max(prob.A1 @ x + prob.A2 @ y - prob.B, initial=0.0))
        rows = max(rows, 0.0)
    if prob.Beq.size:
        rows = max(rows, float(np.abs(prob.E1 @ x + prob.E2 @ y - prob.Beq).max()))
    bnd = float(max(
        np.max(np.maximum(prob.x_lo - x, x - prob.x_hi), initial=0.0),
        np.max(np.maximum(prob.y_lo - y, y - prob.y_hi), initial=0.0),
        0.0,
    ))
    integ = float(np.max(np.abs(y - np.round(y)), initial=0.0))
    den = prob.denominator(x, y)
    obj = prob.numerator(x, y) / den if den != 0 else np.nan
    return FeasibilityReport(rows, bnd, integ, den, obj, tol)
