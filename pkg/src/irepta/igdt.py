"""Robust and opportunistic information-gap planning models.

Both models scale the renewable availability uniformly by ``1 - alpha``
(robust) or ``1 + alpha`` (opportunistic) and bound the resulting LCOA by
``(1 ± beta)·DLCOA``. The products ``alpha·C_W`` and ``alpha·C_S`` are made
linear by writing the unit counts in binary, ``N = sum_l 2^l b_l``, and
replacing each ``alpha·b_l`` by a continuous ``d_l`` held in place by big-M
rows. Objectives are linear, so the instances go through branch-and-bound
with a unit denominator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InfeasibleError
from .milfp import BnbConfig, MilfpSolution, relaxation_bound
from .model.assembly import ModelAssembler
from .model.builder import (ModelInstance, _build_plant, _finish, _objective_vectors,
                            build_deterministic_model)
from .model.params import FacilityParams, PlanningConfig, RenewableProfile
from .model.plan import PlanResult, simulate_operation, solve_model


class IgdtMode(str, enum.Enum):
    ROBUST = "robust"
    OPPORTUNISTIC = "opportunistic"


def default_bits(upper: int) -> int:
    """Highest bit index ``N_b`` with ``2^(N_b+1) - 1 >= upper``."""
    return max(0, math.ceil(math.log2(upper + 1)) - 1)


@dataclass
class IgdtConfig:
    mode: IgdtMode
    beta: float
    dlcoa: float
    M: float = 1.0
    alpha_max: float = 0.5
    nb_w: int | None = None
    nb_s: int | None = None
    cap_slack: float = 1e-9  # relative slack on the LCOA cap against round-off
    envelope: bool = True
    tighten_rounds: int = 12

    def __post_init__(self):
        self.mode = IgdtMode(self.mode)

    def validate(self, cfg: PlanningConfig) -> None:
        if self.beta < 0:
            raise ConfigError("deviation factor beta must be >= 0")
        if self.mode is IgdtMode.OPPORTUNISTIC and self.beta >= 1:
            raise ConfigError("opportunistic beta must be < 1")
        if not self.dlcoa > 0:
            raise ConfigError("DLCOA must be positive")
        if self.M <= 0 or self.alpha_max <= 0:
            raise ConfigError("big-M and alpha_max must be positive")
        if self.mode is IgdtMode.ROBUST and self.alpha_max > 1:
            raise ConfigError("robust alpha_max must be <= 1")
        for nb, ub, name in ((self.bits_w(cfg), cfg.bounds.N_W, "N_W"),
                             (self.bits_s(cfg), cfg.bounds.N_S, "N_S")):
            if nb < 0 or 2 ** (nb + 1) - 1 < ub:
                raise ConfigError(f"{nb + 1} bits cannot represent {name} up to {ub}")

    def bits_w(self, cfg: PlanningConfig) -> int:
        return default_bits(cfg.bounds.N_W) if self.nb_w is None else self.nb_w

    def bits_s(self, cfg: PlanningConfig) -> int:
        return default_bits(cfg.bounds.N_S) if self.nb_s is None else self.nb_s

    @property
    def target(self) -> float:
        sign = 1.0 if self.mode is IgdtMode.ROBUST else -1.0
        return (1.0 + sign * self.beta) * self.dlcoa


@dataclass
class LinearizationReport:
    max_residual: float
    residual_w: float
    residual_s: float
    expansion_ok: bool
    m_binding: bool
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol and self.expansion_ok and not self.m_binding


@dataclass
class IgdtSolution:
    alpha: float
    plan: PlanResult
    achieved: float
    linearization: LinearizationReport
    config: IgdtConfig
    solution: MilfpSolution = field(repr=False, default=None)

    @property
    def residual(self) -> float:
        return self.linearization.max_residual


def linearize_bilinear(asm: ModelAssembler, alpha: int, n_int: int, M: float, nb: int,
                       tag: str, tighten: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Binary expansion of ``n_int`` and exact big-M rows for ``d_l = alpha·b_l``.

    Emits ``n_int = sum_l 2^l b_l``, ``-M b_l <= d_l <= M b_l`` and
    ``alpha - M(1 - b_l) <= d_l <= alpha + M(1 - b_l)``. The product
    ``alpha·n_int`` is then ``sum_l 2^l d_l``. Returns the ``b`` and ``d``
    columns.

    With ``tighten = (a_lo, a_hi)`` (or just ``a_hi`` with ``a_lo = 0``) the
    McCormick envelope rows of ``alpha·b`` over ``[a_lo, a_hi] x [0, 1]`` are
    added as well. For ``alpha`` inside that interval they cut off nothing
    that satisfies the big-M rows with integral ``b`` but strengthen the LP
    relaxation considerably.
    """
    L = nb + 1
    b = asm.var(f"b_{tag}", 0, 1, L, integer=True)
    d = asm.var(f"d_{tag}", -M, M, L)
    asm.add_row(f"expand_{tag}", np.concatenate([[n_int], b]),
                np.concatenate([[1.0], -(2.0 ** np.arange(L))]), "E", 0.0)
    asm.add_rows(f"lin_upper_{tag}", [(d, 1.0), (b, -M)], "L", 0.0)
    asm.add_rows(f"lin_lower_{tag}", [(d, -1.0), (b, -M)], "L", 0.0)
    asm.add_rows(f"lin_alpha_lo_{tag}", [(alpha, 1.0), (d, -1.0), (b, M)], "L", M, k=L)
    asm.add_rows(f"lin_alpha_hi_{tag}", [(d, 1.0), (alpha, -1.0), (b, M)], "L", M, k=L)
    if tighten is not None:
        a_lo, a_hi = (0.0, tighten) if np.isscalar(tighten) else tighten
        # d >= a_lo b, d >= alpha - a_hi (1 - b), d <= a_hi b, d <= alpha - a_lo (1 - b)
        asm.add_rows(f"env_low_{tag}", [(d, -1.0), (b, a_lo)], "L", 0.0)
        asm.add_rows(f"env_high_{tag}", [(alpha, 1.0), (d, -1.0), (b, a_hi)], "L", a_hi, k=L)
        asm.add_rows(f"env_bit_{tag}", [(d, 1.0), (b, -a_hi)], "L", 0.0)
        asm.add_rows(f"env_alpha_{tag}", [(d, 1.0), (alpha, -1.0), (b, -a_lo)], "L", -a_lo, k=L)
    return b, d


def _build_igdt(cfg: PlanningConfig, facs: dict[str, FacilityParams], prof: RenewableProfile,
                igdt: IgdtConfig, alpha_hi: float | None = None,
                alpha_lo: float = 0.0) -> ModelInstance:
    igdt.validate(cfg)
    alpha_hi = igdt.alpha_max if alpha_hi is None else min(alpha_hi, igdt.alpha_max)
    alpha_lo = min(max(alpha_lo, 0.0), alpha_hi)
    robust = igdt.mode is IgdtMode.ROBUST
    headroom = 1.0 if robust else 1.0 + igdt.alpha_max
    h = _build_plant(cfg, facs, prof, renewable_rows=False, renewable_headroom=headroom)
    asm = h.asm
    alpha = asm.var("alpha", alpha_lo, alpha_hi)[0]
    h.scalars.add("alpha")
    sign = -1.0 if robust else 1.0
    for key, nb, p_sta, prow in (("W", igdt.bits_w(cfg), prof.p_w_sta, "P_W"),
                                 ("S", igdt.bits_s(cfg), prof.p_s_sta, "P_S")):
        n_col = asm.index[f"N_{key}"][0]
        asm.set_integer(f"N_{key}", False)  # integrality now comes from the bits
        b, d = linearize_bilinear(asm, alpha, n_col, igdt.M, nb, key,
                                  (alpha_lo, alpha_hi) if igdt.envelope else None)
        c0 = facs[key].C0
        # P_t = (1 ± alpha)·P_sta·C with alpha·C = C0·sum 2^l d_l
        terms = [(asm.index[prow], 1.0), (asm.index[f"C_{key}"][0], -p_sta)]
        for l in range(nb + 1):
            terms.append((d[l], -sign * p_sta * c0 * 2.0 ** l))
        asm.add_rows(f"rg_{key}", terms, "E", 0.0, k=cfg.N)

    p0, p, q = _objective_vectors(cfg, facs, asm)
    # numerator <= target·denominator; the denominator stays positive on the feasible set
    k = igdt.target * (1.0 + igdt.cap_slack)
    asm.add_row("lcoa_cap", np.arange(asm.n), p - k * q, "L", -p0)
    obj = np.zeros(asm.n)
    obj[alpha] = -1.0 if robust else 1.0
    kind = "igdt_robust" if robust else "igdt_opportunistic"
    return _finish(h, cfg, facs, prof, kind, 0.0, obj, 1.0, np.zeros(asm.n), 1.0,
                   beta=igdt.beta, dlcoa=igdt.dlcoa, bits={"W": igdt.bits_w(cfg),
                                                           "S": igdt.bits_s(cfg)})


def build_robust_igdt(cfg: PlanningConfig, facs: dict[str, FacilityParams],
                      prof: RenewableProfile, igdt: IgdtConfig) -> ModelInstance:
    """Largest uniform shortfall ``alpha`` keeping worst-case LCOA below ``(1+beta)·DLCOA``."""
    if igdt.mode is not IgdtMode.ROBUST:
        raise ConfigError("robust builder needs mode = robust")
    return _build_igdt(cfg, facs, prof, igdt)


def build_opportunistic_igdt(cfg: PlanningConfig, facs: dict[str, FacilityParams],
                             prof: RenewableProfile, igdt: IgdtConfig) -> ModelInstance:
    """Smallest uniform surplus ``alpha`` that brings LCOA down to ``(1-beta)·DLCOA``."""
    if igdt.mode is not IgdtMode.OPPORTUNISTIC:
        raise ConfigError("opportunistic builder needs mode = opportunistic")
    return _build_igdt(cfg, facs, prof, igdt)


def verify_linearization(inst: ModelInstance, v: np.ndarray, tol: float = 1e-6) -> LinearizationReport:
    """Residuals ``max_l |d_l - alpha·b_l|`` and the binary expansion of the unit counts.

    Also flags a binding big-M (``alpha >= M``), where the rows would cut off
    larger horizons instead of representing the product.
    """
    alpha = float(v[inst.index["alpha"][0]])
    res = {}
    expansion_ok = True
    for key in ("W", "S"):
        b = v[inst.index[f"b_{key}"]]
        d = v[inst.index[f"d_{key}"]]
        res[key] = float(np.max(np.abs(d - alpha * b))) if b.size else 0.0
        n = v[inst.index[f"N_{key}"][0]]
        bits = np.round(b)
        recon = float(np.sum(bits * 2.0 ** np.arange(b.size)))
        expansion_ok &= bool(np.all(np.abs(b - bits) <= tol) and recon == round(n)
                             and abs(n - recon) <= tol)
    M = float(inst.hi[inst.index["d_W"][0]])
    return LinearizationReport(max(res.values()), res["W"], res["S"], expansion_ok,
                               alpha >= M - tol, tol)


def _margin(a: float) -> float:
    # slack added to derived bounds so LP round-off never cuts off the optimum
    return 1e-7 + 1e-6 * abs(a)


def scaled_lcoa(alpha: float, mode: IgdtMode | str, cfg: PlanningConfig,
                facs: dict[str, FacilityParams], prof: RenewableProfile,
                bnb: BnbConfig | None = None) -> float:
    """Minimum LCOA with availability scaled by ``1 - alpha`` (robust) or ``1 + alpha``.

    Monotone in ``alpha``, so a horizon is feasible for the IGDT model exactly
    when this value meets the LCOA target. Returns ``inf`` if no plan exists.
    """
    f = 1.0 - alpha if IgdtMode(mode) is IgdtMode.ROBUST else 1.0 + alpha
    try:
        plan, _ = solve_model(build_deterministic_model(cfg, facs, prof, f, f), bnb)
    except InfeasibleError:
        return math.inf
    return plan.lcoa


def _opportunistic_upper_bound(cfg, facs, prof, igdt: IgdtConfig, bnb: BnbConfig,
                               refine: int = 2) -> float:
    """A horizon known to reach the target, by doubling then a few bisection steps."""
    target = igdt.target
    if scaled_lcoa(igdt.alpha_max, igdt.mode, cfg, facs, prof, bnb) > target:
        raise InfeasibleError(f"target {target:.6g} is unreachable for alpha <= {igdt.alpha_max}")
    lo, hi = 0.0, max(min(igdt.beta, igdt.alpha_max), 1e-3)
    while hi < igdt.alpha_max and scaled_lcoa(hi, igdt.mode, cfg, facs, prof, bnb) > target:
        lo, hi = hi, min(2.0 * hi, igdt.alpha_max)
    for _ in range(refine):
        mid = 0.5 * (lo + hi)
        if scaled_lcoa(mid, igdt.mode, cfg, facs, prof, bnb) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def solve_igdt(cfg: PlanningConfig, facs: dict[str, FacilityParams], prof: RenewableProfile,
               igdt: IgdtConfig, bnb: BnbConfig | None = None) -> IgdtSolution:
    """Build, solve and decode an IGDT instance; raises InfeasibleError if no plan meets the cap.

    With the envelope rows on, the horizon interval they use is narrowed
    before branching. The root relaxation bounds the optimum from the
    optimizing side (above for robust, below for opportunistic); the bound is
    fed back and the root re-solved until it moves by less than 1%. In
    opportunistic mode a few deterministic solves on the scaled-up profile
    first find a horizon known to reach the target, which caps alpha from
    above.
    Every bound is valid for the optimum, so the final model has the same
    optimal value as the untightened one.
    """
    bnb = bnb or BnbConfig()
    igdt.validate(cfg)
    alpha_lo, alpha_hi = 0.0, igdt.alpha_max
    robust = igdt.mode is IgdtMode.ROBUST

    def tighten():
        nonlocal alpha_lo, alpha_hi
        for _ in range(igdt.tighten_rounds):
            inst = _build_igdt(cfg, facs, prof, igdt, alpha_hi, alpha_lo)
            root = relaxation_bound(inst.problem, bnb.lp)
            if not math.isfinite(root):
                break
            if robust:
                new = min(alpha_hi, -root + _margin(root))
                done = new > 0.99 * alpha_hi
                alpha_hi = new
            else:
                new = max(alpha_lo, root - _margin(root))
                done = new - alpha_lo <= 0.01 * max(alpha_hi - alpha_lo, 1e-12)
                alpha_lo = new
            if done:
                break

    if igdt.envelope and igdt.beta > 0:
        if not robust:
            ub = _opportunistic_upper_bound(cfg, facs, prof, igdt, bnb)
            alpha_hi = min(igdt.alpha_max, ub + _margin(ub))
        tighten()
    inst = _build_igdt(cfg, facs, prof, igdt, alpha_hi, alpha_lo)
    plan, sol = solve_model(inst, bnb)
    v = plan.vector
    alpha = float(v[inst.index["alpha"][0]])
    report = verify_linearization(inst, v)
    plan.meta.update(alpha=alpha, beta=igdt.beta, mode=igdt.mode.value,
                     alpha_interval=[alpha_lo, alpha_hi])
    return IgdtSolution(alpha, plan, plan.lcoa, report, igdt, sol)


def worst_case_recheck(plan: PlanResult, alpha: float, mode: IgdtMode | str,
                       cfg: PlanningConfig, facs: dict[str, FacilityParams],
                       prof: RenewableProfile, bnb: BnbConfig | None = None) -> float:
    """Re-simulate the plan on the profile scaled by ``1 - alpha`` (robust) or ``1 + alpha``."""
    mode = IgdtMode(mode)
    f = 1.0 - alpha if mode is IgdtMode.ROBUST else 1.0 + alpha
    return simulate_operation(plan.pinned_capacities(), cfg, facs, prof, f, f, bnb).dlcoa


__all__ = [
    "IgdtConfig", "IgdtMode", "IgdtSolution", "LinearizationReport", "build_opportunistic_igdt",
    "build_robust_igdt", "default_bits", "linearize_bilinear", "scaled_lcoa", "solve_igdt",
    "verify_linearization", "worst_case_recheck",
]
