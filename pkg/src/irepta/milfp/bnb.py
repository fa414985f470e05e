"""Branch-and-bound over Charnes-Cooper transformed node LPs."""

from __future__ import annotations

import enum
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateScale, NumericalFailure
from ..lp import LpConfig, LpStatus, solve_lp
from .problem import MilfpProblem, relax
from .transform import CcLpProblem, charnes_cooper_transform, recover_solution

log = logging.getLogger(__name__)


class MilfpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    NODE_LIMIT = "NodeLimit"
    TIME_LIMIT = "TimeLimit"


@dataclass(frozen=True)
class BnbConfig:
    int_tol: float = 1e-6
    feas_tol: float = 1e-7
    rel_gap: float = 1e-9
    node_limit: int = 100_000
    time_limit: float = 600.0
    u_min: float = 1e-10
    lp: LpConfig = field(default_factory=LpConfig)


@dataclass
class BnbNode:
    id: int
    rows: list[tuple[int, str, int]]
    bound: float
    depth: int


@dataclass
class MilfpSolution:
    status: MilfpStatus
    x: np.ndarray | None
    y: np.ndarray | None
    objective: float
    nodes_explored: int
    incumbent_history: list[tuple[int, float]]
    lp_iterations: int = 0
    runtime: float = 0.0

    @property
    def x_star(self):
        return self.x

    @property
    def y_star(self):
        return self.y

    @property
    def ok(self) -> bool:
        return self.status is MilfpStatus.OPTIMAL


def _tol(ref: float, rel: float) -> float:
    return rel * max(1.0, abs(ref))


def _select(open_nodes: list[BnbNode], rel_gap: float) -> BnbNode:
    best = min(n.bound for n in open_nodes)
    tie = _tol(best, rel_gap) if math.isfinite(best) else 0.0
    pick = None
    for n in open_nodes:
        if n.bound <= best + tie and (
                pick is None or (n.depth, -n.id) > (pick.depth, -pick.id)):
            pick = n
    open_nodes.remove(pick)
    return pick


def solve_milfp(prob: MilfpProblem, cfg: BnbConfig | None = None) -> MilfpSolution:
    """Minimize a MILFP with the combined Charnes-Cooper / branch-and-bound scheme.

    Each node is the transformed LP of the relaxation plus homogenized
    branching rows ``w_j >= ceil(v)·u`` / ``w_j <= floor(v)·u``. Nodes are
    selected best-first on the bound inherited from the parent LP; among
    bounds equal within ``rel_gap`` the deepest node wins, then the lowest id.
    The branching variable is the most fractional ``w_j/u``.

    Pure LFPs (no integer variables) finish at the root, and a constant
    denominator turns the scheme into ordinary MILP branch-and-bound.
    """
    cfg = cfg or BnbConfig()
    t0 = time.perf_counter()
    cc: CcLpProblem = charnes_cooper_transform(relax(prob))
    n_y = prob.n_y

    next_id = 1
    open_nodes = [BnbNode(next_id, [], -math.inf, 0)]
    incumbent = math.inf
    best_x = best_y = None
    history: list[tuple[int, float]] = []
    explored = 0
    lp_iters = 0
    status = None

    while open_nodes:
        if explored >= cfg.node_limit:
            status = MilfpStatus.NODE_LIMIT
            break
        if time.perf_counter() - t0 > cfg.time_limit:
            status = MilfpStatus.TIME_LIMIT
            break
        node = _select(open_nodes, cfg.rel_gap)
        if node.bound >= incumbent - _tol(incumbent, cfg.rel_gap):
            continue
        explored += 1
        sol = solve_lp(cc.node_lp(node.rows), cfg.lp)
        lp_iters += sol.iterations
        if sol.status is LpStatus.INFEASIBLE:
            log.debug("node %d infeasible", node.id)
            continue
        if sol.status is not LpStatus.OPTIMAL:
            raise NumericalFailure(f"node {node.id}: LP status {sol.status.value}")
        obj = sol.objective
        log.debug("node %d depth %d: lp %.10g, incumbent %.10g, open %d",
                  node.id, node.depth, obj, incumbent, len(open_nodes))
        try:
            _, yr = recover_solution(sol, cc, cfg.u_min)
        except DegenerateScale:
            log.debug("node %d: degenerate scale, treated as infeasible", node.id)
            continue
        if obj >= incumbent - _tol(incumbent, cfg.rel_gap):
            continue

        frac = np.abs(yr - np.round(yr)) if n_y else np.zeros(0)
        if n_y == 0 or frac.max() <= cfg.int_tol:
            incumbent = obj
            best_x, best_y = recover_solution(sol, cc, cfg.u_min)
            history.append((node.id, obj))
            log.debug("node %d: new incumbent %.12g", node.id, obj)
            cut = incumbent - _tol(incumbent, cfg.rel_gap)
            open_nodes = [n for n in open_nodes if n.bound < cut]
            continue

        j = int(np.argmax(frac))
        val = yr[j]
        up = (j, "G", int(math.ceil(val)))
        down = (j, "L", int(math.floor(val)))
        for row in (up, down):
            next_id += 1
            open_nodes.append(BnbNode(next_id, node.rows + [row], obj, node.depth + 1))

    runtime = time.perf_counter() - t0
    if status is None:
        status = MilfpStatus.OPTIMAL if best_x is not None else MilfpStatus.INFEASIBLE
    if best_x is None:
        return MilfpSolution(status, None, None, math.nan, explored, history, lp_iters, runtime)
    y = np.round(best_y)
    x = np.minimum(np.maximum(best_x, prob.x_lo), prob.x_hi)
    return MilfpSolution(status, x, y, prob.ratio(x, y), explored, history, lp_iters, runtime)


def relaxation_bound(prob: MilfpProblem, lp: LpConfig | None = None) -> float:
    """Optimal value of the continuous relaxation; ``inf`` when it is infeasible."""
    cc = charnes_cooper_transform(relax(prob))
    sol = solve_lp(cc.node_lp([]), lp or LpConfig())
    if sol.status is LpStatus.INFEASIBLE:
        return math.inf
    if sol.status is not LpStatus.OPTIMAL:
        raise NumericalFailure(f"root relaxation: LP status {sol.status.value}")
    return sol.objective
