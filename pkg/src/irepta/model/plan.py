"""Solving, decoding and re-simulating plant plans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DecodeError, InfeasibleError, LimitReached
from ..milfp import BnbConfig, MilfpSolution, MilfpStatus, solve_milfp
from .builder import (CAPACITY_KEYS, SCHEDULE_KEYS, UNIT_KEYS, ModelInstance,
                      build_operation_model, cost_terms)
from .params import COST_UNIT, FacilityParams, PlanningConfig, RenewableProfile

LCOA_KINDS = ("lcoa", "fixed_ras", "operation")


@dataclass
class PlanResult:
    """Decoded plan: capacities, LCOA decomposition and operation schedules.

    Costs are annual currency amounts, ``O_A`` is tonnes per year and
    ``lcoa`` is currency per tonne.
    """

    capacities: dict[str, float]
    units: dict[str, int]
    lcoa: float
    C_inv: float
    C_OM: float
    R_oper: float
    O_A: float
    r_as: float
    flh_ae: float
    c_inv_tot: float
    schedules: dict[str, np.ndarray]
    objective: float
    kind: str
    meta: dict = field(default_factory=dict)
    vector: np.ndarray | None = field(default=None, repr=False)

    @property
    def total_cost(self) -> float:
        return self.C_inv + self.C_OM + self.R_oper

    def revenue(self, price: float) -> float:
        return price * self.O_A - self.total_cost

    def pinned_capacities(self) -> dict[str, float]:
        out = {k: self.capacities[k] for k in CAPACITY_KEYS}
        out.update({k: self.units[k] for k in UNIT_KEYS})
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "capacities": dict(self.capacities),
            "units": dict(self.units),
            "lcoa": self.lcoa,
            "C_inv": self.C_inv,
            "C_OM": self.C_OM,
            "R_oper": self.R_oper,
            "O_A": self.O_A,
            "r_as": self.r_as,
            "flh_ae": self.flh_ae,
            "c_inv_tot": self.c_inv_tot,
            "objective": self.objective,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlanResult":
        try:
            return cls(
                capacities={k: float(v) for k, v in d["capacities"].items()},
                units={k: int(v) for k, v in d["units"].items()},
                lcoa=float(d["lcoa"]), C_inv=float(d["C_inv"]), C_OM=float(d["C_OM"]),
                R_oper=float(d["R_oper"]), O_A=float(d["O_A"]), r_as=float(d["r_as"]),
                flh_ae=float(d["flh_ae"]), c_inv_tot=float(d["c_inv_tot"]),
                schedules={}, objective=float(d["objective"]), kind=d.get("kind", "lcoa"),
                meta=dict(d.get("meta", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"malformed plan document: {exc}") from None


def total_initial_investment(capacities: dict[str, float], cfg: PlanningConfig,
                             facs: dict[str, FacilityParams]) -> float:
    tot = facs["AS"].I_init * cfg.C_AS
    for k in ("W", "S", "AE", "HS", "FC", "B"):
        tot += facs[k].I_init * COST_UNIT[k] * capacities[f"C_{k}"]
    return tot


def _check_status(sol: MilfpSolution) -> None:
    if sol.status is MilfpStatus.INFEASIBLE:
        raise InfeasibleError("model is infeasible")
    if sol.status is not MilfpStatus.OPTIMAL:
        raise LimitReached(f"search stopped: {sol.status.value}")


def extract_plan(inst: ModelInstance, sol: MilfpSolution, rel_tol: float = 1e-8) -> PlanResult:
    """Decode a solution and recompute the LCOA decomposition from the schedules.

    The recomputed objective (LCOA, or minus revenue for the revenue model)
    must agree with the solver objective to ``rel_tol``.
    """
    _check_status(sol)
    v = inst.unpack(sol.x, sol.y)
    cfg, facs = inst.cfg, inst.facs
    units = {k: int(round(inst.get(v, k))) for k in UNIT_KEYS}
    caps = {k: inst.get(v, k) for k in CAPACITY_KEYS}
    for key in ("W", "S", "AE"):
        caps[f"C_{key}"] = units[f"N_{key}"] * facs[key].C0
    terms = cost_terms(inst, v)
    total = terms["C_inv"] + terms["C_OM"] + terms["R_oper"]
    O_A = terms["O_A"]
    lcoa = total / O_A if O_A > 0 else math.inf
    sol_obj = sol.objective * inst.objective_scale

    if inst.kind in LCOA_KINDS:
        ref = lcoa
    elif inst.kind == "revenue":
        ref = -(inst.meta["price"] * O_A - total)
    else:
        ref = None
    if ref is not None and abs(ref - sol_obj) > rel_tol * max(1.0, abs(ref)):
        raise DecodeError(f"recomputed objective {ref!r} disagrees with solver value {sol_obj!r}")

    sched = {k: inst.get(v, k).copy() for k in SCHEDULE_KEYS}
    sched["n_HS"] = inst.get(v, "n_HS").copy()
    sched["ESOC"] = inst.get(v, "ESOC").copy()
    if "delta" in inst.index:
        sched["delta"] = inst.get(v, "delta").copy()
    w = cfg.annual_factor
    flh = w * cfg.dt * float(np.sum(sched["P_AE"])) / caps["C_AE"] if caps["C_AE"] > 0 else 0.0
    meta = dict(inst.meta)
    meta.pop("scalars", None)
    meta.update(nodes=sol.nodes_explored, runtime=sol.runtime, kind=inst.kind)
    return PlanResult(
        capacities=caps, units=units, lcoa=lcoa, C_inv=terms["C_inv"], C_OM=terms["C_OM"],
        R_oper=terms["R_oper"], O_A=O_A, r_as=O_A / cfg.C_AS, flh_ae=flh,
        c_inv_tot=total_initial_investment(caps, cfg, facs), schedules=sched,
        objective=sol_obj, kind=inst.kind, meta=meta, vector=v,
    )


def solve_model(inst: ModelInstance, bnb: BnbConfig | None = None) -> tuple[PlanResult, MilfpSolution]:
    """Solve with branch-and-bound and decode; raises on infeasibility or limits."""
    sol = solve_milfp(inst.problem, bnb)
    return extract_plan(inst, sol), sol


@dataclass
class OperationResult:
    dlcoa: float
    plan: PlanResult
    solution: MilfpSolution


def simulate_operation(capacities: dict[str, float], cfg: PlanningConfig,
                       facs: dict[str, FacilityParams], prof: RenewableProfile,
                       scale_w: float = 1.0, scale_s: float = 1.0,
                       bnb: BnbConfig | None = None) -> OperationResult:
    """Best operation of a fixed plant on a profile; returns its LCOA.

    ``scale_w``/``scale_s`` multiply the renewable availability without
    clipping, which the worst/best case re-checks need.
    Raises :class:`InfeasibleError` when the plant cannot meet minimum loads.
    """
    inst = build_operation_model(capacities, cfg, facs, prof, scale_w, scale_s)
    plan, sol = solve_model(inst, bnb)
    return OperationResult(plan.lcoa, plan, sol)


def plan_diagnostics(inst: ModelInstance, plan: PlanResult) -> dict[str, float]:
    """Residuals that planning results are expected to satisfy."""
    s = plan.schedules
    bal = (s["P_W"] + s["P_S"] + s["P_disc"] + s["P_FC"] - s["P_AE"] - s["P_AS"]
           - s["P_ch"] - s["P_curt"])
    c = plan.capacities
    b = inst.cfg.soc_boundary
    rows, bounds = inst.residuals(plan.vector)
    unit_err = max(abs(c[f"C_{k}"] / inst.facs[k].C0 - plan.units[f"N_{k}"])
                   for k in ("W", "S", "AE"))
    return {
        "power_balance": float(np.max(np.abs(bal))),
        "hs_boundary": float(max(abs(s["n_HS"][0] - b * c["C_HS"]),
                                 abs(s["n_HS"][-1] - b * c["C_HS"]))),
        "bess_boundary": float(max(abs(s["ESOC"][0] - b * c["C_B"]),
                                   abs(s["ESOC"][-1] - b * c["C_B"]))),
        "complementarity": float(np.max(s["P_ch"] * s["P_disc"])),
        "lcoa_identity": abs(plan.lcoa * plan.O_A - plan.total_cost) / max(1.0, plan.total_cost),
        "unit_integrality": float(unit_err),
        "row_violation": rows,
        "bound_violation": bounds,
    }
