"""Planning and operation models of the off-grid renewable-to-ammonia plant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError, DecodeError
from ..milfp.problem import MilfpProblem
from .assembly import ModelAssembler
from .params import (COST_UNIT, FacilityParams, PlanningConfig, RenewableProfile,
                     config_hash, crf)

CAPACITY_KEYS = ("C_W", "C_S", "C_AE", "C_HS", "C_FC", "C_B")
UNIT_KEYS = ("N_W", "N_S", "N_AE")
SCHEDULE_KEYS = ("P_W", "P_S", "P_AE", "P_AS", "P_FC", "P_ch", "P_disc", "P_curt",
                 "q_in", "q_out", "q_out1")


def transient_factors(dt_as: float, t_trans: float, dt: float) -> np.ndarray:
    """``exp(-tau / t_trans)`` at the local offsets ``tau = 0, dt, ...`` of one period.

    ``t_trans = 0`` switches the transient off (all factors zero).
    """
    steps = int(round(dt_as / dt))
    if steps < 1 or abs(steps * dt - dt_as) > 1e-9 * max(1.0, dt_as):
        raise ConfigError("dt_as must be a positive multiple of dt")
    if t_trans < 0:
        raise ConfigError("t_trans must be >= 0")
    if t_trans == 0:
        return np.zeros(steps)
    return np.exp(-np.arange(steps) * dt / t_trans)


def _transient_terms(n_periods: int, factors: np.ndarray):
    spp = factors.size
    t = np.arange(n_periods * spp)
    k = t // spp
    k_next = np.minimum(k + 1, n_periods - 1)  # the last period has no successor
    e = factors[t % spp]
    return k, k_next, e


def as_transient_coefficients(dt_as: float, t_trans: float, dt: float,
                              n_periods: int = 1) -> np.ndarray:
    """Dense ``(n_periods·steps, n_periods)`` map from setpoints ``q_k`` to steps ``q_t``.

    Within period ``k`` at local offset ``tau``:
    ``q_t = q_k + (q_k - q_{k+1})·exp(-tau / t_trans)``, with ``q_{k+1} := q_k``
    in the last period.
    """
    factors = transient_factors(dt_as, t_trans, dt)
    k, k_next, e = _transient_terms(n_periods, factors)
    Q = np.zeros((k.size, n_periods))
    rows = np.arange(k.size)
    np.add.at(Q, (rows, k), 1.0 + e)
    np.add.at(Q, (rows, k_next), -e)
    return Q


@dataclass
class ModelInstance:
    """A built model plus everything needed to decode a solution.

    ``index`` maps each decision variable name (``C_W``, ``P_AE``, ``delta``,
    ``q_qss``, ...) to its model columns. ``x_cols``/``y_cols`` give the model
    column of every continuous / integer entry of ``problem``. Multiplying the
    problem objective by ``objective_scale`` gives currency units (LCOA in
    currency per tonne for fractional kinds).
    """

    problem: MilfpProblem
    index: dict[str, np.ndarray]
    col_names: list[str]
    x_cols: np.ndarray
    y_cols: np.ndarray
    kind: str
    cfg: PlanningConfig
    facs: dict[str, FacilityParams]
    prof: RenewableProfile
    A: sp.csr_matrix
    sense: np.ndarray
    rhs: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    objective_scale: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def n_cols(self) -> int:
        return len(self.col_names)

    def unpack(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if x is None or len(x) != self.x_cols.size or len(y) != self.y_cols.size:
            raise DecodeError("solution does not match the model's column split")
        v = np.empty(self.n_cols)
        v[self.x_cols] = x
        v[self.y_cols] = y
        return v

    def pack(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        v = np.asarray(v, dtype=float)
        if v.size != self.n_cols:
            raise DecodeError("vector length does not match the model")
        return v[self.x_cols].copy(), v[self.y_cols].copy()

    def get(self, v: np.ndarray, name: str):
        if name not in self.index:
            raise DecodeError(f"no variable {name!r} in model")
        cols = self.index[name]
        return float(v[cols[0]]) if self.meta["scalars"].get(name) else v[cols]

    def residuals(self, v: np.ndarray) -> tuple[float, float]:
        """Largest row violation and largest bound violation of a full vector."""
        Av = self.A @ v
        viol = np.where(self.sense == "L", Av - self.rhs,
                        np.where(self.sense == "G", self.rhs - Av, np.abs(Av - self.rhs)))
        rv = float(max(0.0, viol.max())) if viol.size else 0.0
        bv = float(max(0.0, np.max(self.lo - v), np.max(v - self.hi)))
        return rv, bv


@dataclass
class PlantHandles:
    asm: ModelAssembler
    scalars: set
    renewable_hi: tuple[float, float]


def _facility(facs: dict[str, FacilityParams], key: str) -> FacilityParams:
    try:
        f = facs[key]
    except KeyError:
        raise ConfigError(f"facility {key} missing from configuration") from None
    f.validate()
    return f


def _build_plant(cfg: PlanningConfig, facs: dict[str, FacilityParams], prof: RenewableProfile,
                 *, scale_w: float = 1.0, scale_s: float = 1.0, renewable_rows: bool = True,
                 renewable_headroom: float = 1.0, pinned: dict | None = None) -> PlantHandles:
    cfg.validate()
    prof.validate()
    if prof.N != cfg.N:
        raise ConfigError(f"profile has {prof.N} steps but the horizon is N = {cfg.N}")
    if abs(prof.dt - cfg.dt) > 1e-12:
        raise ConfigError("profile step differs from planning step")
    W, S, AE, FC, HS, AS, B = (_facility(facs, k) for k in ("W", "S", "AE", "FC", "HS", "AS", "B"))
    N, dt, bnd = cfg.N, cfg.dt, cfg.bounds
    q_r = cfg.q_rated
    M = cfg.big_m
    if M <= 0:
        raise ConfigError("BESS big-M must be positive")

    asm = ModelAssembler()
    scalars = set()

    def scalar(name, lo, hi, integer=False):
        scalars.add(name)
        return asm.var(name, lo, hi, integer=integer)[0]

    C_W_hi = bnd.N_W * W.C0
    C_S_hi = bnd.N_S * S.C0
    C_AE_hi = bnd.N_AE * AE.C0
    cw = scalar("C_W", 0.0, C_W_hi)
    cs = scalar("C_S", 0.0, C_S_hi)
    cae = scalar("C_AE", 0.0, C_AE_hi)
    chs = scalar("C_HS", 0.0, bnd.C_HS)
    cfc = scalar("C_FC", 0.0, bnd.C_FC)
    cb = scalar("C_B", 0.0, bnd.C_B)
    nw = scalar("N_W", 0, bnd.N_W, integer=True)
    ns = scalar("N_S", 0, bnd.N_S, integer=True)
    nae = scalar("N_AE", 0, bnd.N_AE, integer=True)

    kw = renewable_headroom * max(1.0, scale_w)
    ks = renewable_headroom * max(1.0, scale_s)
    pw_hi, ps_hi = kw * C_W_hi, ks * C_S_hi
    pb_hi = bnd.C_B / cfg.H_B
    pw = asm.var("P_W", 0.0, pw_hi, N)
    ps = asm.var("P_S", 0.0, ps_hi, N)
    pae = asm.var("P_AE", 0.0, C_AE_hi, N)
    pas = asm.var("P_AS", AS.kappa * AS.eta_lo * q_r / 1000.0,
                  AS.kappa * AS.eta_hi * q_r / 1000.0, N)
    pfc = asm.var("P_FC", 0.0, bnd.C_FC, N)
    pch = asm.var("P_ch", 0.0, pb_hi, N)
    pdis = asm.var("P_disc", 0.0, pb_hi, N)
    pcurt = asm.var("P_curt", 0.0, pw_hi + ps_hi + pb_hi + bnd.C_FC, N)
    qin = asm.var("q_in", 0.0, C_AE_hi * 1000.0 / AE.kappa, N)
    qout = asm.var("q_out", AS.eta_lo * q_r, AS.eta_hi * q_r, N)
    qout1 = asm.var("q_out1", 0.0, bnd.C_FC * 1000.0 / FC.kappa, N)
    nhs = asm.var("n_HS", 0.0, bnd.C_HS, N + 1)
    esoc = asm.var("ESOC", 0.0, bnd.C_B, N + 1)
    K = cfg.n_periods
    qk = asm.var("q_qss", AS.eta_lo * q_r, AS.eta_hi * q_r, K)
    if not cfg.relax_bess_binaries:
        delta = asm.var("delta", 0, 1, N, integer=True)

    # standard unit sizes
    for c, n, f in ((cw, nw, W), (cs, ns, S), (cae, nae, AE)):
        asm.add_rows(f"units_{f.id}", [(c, 1.0), (n, -f.C0)], "E", 0.0, k=1)

    # electrolysis and fuel cell conversion and ranges
    asm.add_rows("ae_conv", [(pae, 1.0), (qin, -AE.kappa / 1000.0)], "E", 0.0)
    asm.add_rows("ae_max", [(pae, 1.0), (cae, -AE.eta_hi)], "L", 0.0, k=N)
    asm.add_rows("ae_min", [(pae, -1.0), (cae, AE.eta_lo)], "L", 0.0, k=N)
    asm.add_rows("fc_conv", [(pfc, 1.0), (qout1, -FC.kappa / 1000.0)], "E", 0.0)
    asm.add_rows("fc_max", [(pfc, 1.0), (cfc, -FC.eta_hi)], "L", 0.0, k=N)
    if FC.eta_lo > 0:
        asm.add_rows("fc_min", [(pfc, -1.0), (cfc, FC.eta_lo)], "L", 0.0, k=N)

    # ammonia synthesis: conversion, setpoint transients, ramps, utilization
    asm.add_rows("as_conv", [(pas, 1.0), (qout, -AS.kappa / 1000.0)], "E", 0.0)
    factors = transient_factors(cfg.effective_dt_as, cfg.t_trans, dt)
    k_idx, k_next, e = _transient_terms(K, factors)
    asm.add_rows("as_transient", [(qout, 1.0), (qk[k_idx], -(1.0 + e)), (qk[k_next], e)],
                 "E", 0.0)
    if N > 1:
        asm.add_rows("as_ramp_up", [(qout[1:], 1.0), (qout[:-1], -1.0)], "L",
                     cfg.ramp_up * q_r)
        asm.add_rows("as_ramp_down", [(qout[1:], -1.0), (qout[:-1], 1.0)], "L",
                     -cfg.ramp_down * q_r)
    w = cfg.annual_factor
    asm.add_row("as_utilization", qout, w * cfg.c_h2a * dt / cfg.C_AS, "L", 1.0)

    # hydrogen storage
    asm.add_rows("hs_balance", [(nhs[1:], 1.0), (nhs[:-1], -1.0), (qin, -dt), (qout, dt),
                                (qout1, dt)], "E", 0.0)
    asm.add_rows("hs_max", [(nhs, 1.0), (chs, -HS.eta_hi)], "L", 0.0, k=N + 1)
    asm.add_rows("hs_min", [(nhs, -1.0), (chs, HS.eta_lo)], "L", 0.0, k=N + 1)
    asm.add_rows("hs_boundary", [(nhs[[0, N]], 1.0), (chs, -cfg.soc_boundary)], "E", 0.0, k=2)

    # battery
    asm.add_rows("bess_balance", [(esoc[1:], 1.0), (esoc[:-1], -(1.0 - cfg.xi_B)),
                                  (pch, -dt * cfg.eta_B), (pdis, dt / cfg.eta_B)], "E", 0.0)
    asm.add_rows("bess_max", [(esoc, 1.0), (cb, -B.eta_hi)], "L", 0.0, k=N + 1)
    asm.add_rows("bess_min", [(esoc, -1.0), (cb, B.eta_lo)], "L", 0.0, k=N + 1)
    asm.add_rows("bess_boundary", [(esoc[[0, N]], 1.0), (cb, -cfg.soc_boundary)], "E", 0.0, k=2)
    asm.add_rows("bess_ch_max", [(pch, 1.0), (cb, -1.0 / cfg.H_B)], "L", 0.0, k=N)
    asm.add_rows("bess_disc_max", [(pdis, 1.0), (cb, -1.0 / cfg.H_B)], "L", 0.0, k=N)
    if not cfg.relax_bess_binaries:
        asm.add_rows("bess_ch_excl", [(pch, 1.0), (delta, -M)], "L", 0.0)
        asm.add_rows("bess_disc_excl", [(pdis, 1.0), (delta, M)], "L", M)

    # renewables and power balance
    if renewable_rows:
        asm.add_rows("rg_wind", [(pw, 1.0), (cw, -scale_w * prof.p_w_sta)], "E", 0.0)
        asm.add_rows("rg_solar", [(ps, 1.0), (cs, -scale_s * prof.p_s_sta)], "E", 0.0)
    asm.add_rows("power_balance", [(pw, 1.0), (ps, 1.0), (pdis, 1.0), (pfc, 1.0), (pae, -1.0),
                                   (pas, -1.0), (pch, -1.0), (pcurt, -1.0)], "E", 0.0)

    if pinned:
        for key, val in pinned.items():
            if key not in asm.index or key not in scalars:
                raise ConfigError(f"cannot pin unknown capacity {key!r}")
            asm.add_rows(f"pin_{key}", [(asm.index[key][0], 1.0)], "E", float(val), k=1)

    return PlantHandles(asm, scalars, (pw_hi, ps_hi))


def _investment_coefficients(cfg: PlanningConfig, facs) -> tuple[dict, dict, float, float]:
    """Per-capacity annualized investment and O&M coefficients plus the AS constants."""
    inv, om = {}, {}
    for key in ("W", "S", "AE", "HS", "FC", "B"):
        f = facs[key]
        inv[f"C_{key}"] = crf(cfg.r, f.Y) * f.I_init * COST_UNIT[key]
        om[f"C_{key}"] = f.I_OM * f.I_init * COST_UNIT[key]
    AS = facs["AS"]
    inv_as = crf(cfg.r, AS.Y) * AS.I_init * cfg.C_AS
    om_as = AS.I_OM * AS.I_init * cfg.C_AS
    return inv, om, inv_as, om_as


def cost_terms(inst: ModelInstance, v: np.ndarray) -> dict[str, float]:
    """Annual investment, O&M, BESS degradation and ammonia output of a full vector."""
    cfg, facs = inst.cfg, inst.facs
    inv, om, inv_as, om_as = _investment_coefficients(cfg, facs)
    caps = {k: inst.get(v, k) for k in CAPACITY_KEYS}
    w = cfg.annual_factor
    C_inv = inv_as + sum(inv[k] * caps[k] for k in CAPACITY_KEYS)
    C_OM = om_as + sum(om[k] * caps[k] for k in CAPACITY_KEYS)
    R_oper = w * cfg.lambda_deg * cfg.dt * float(np.sum(inst.get(v, "P_disc")))
    O_A = w * cfg.c_h2a * cfg.dt * float(np.sum(inst.get(v, "q_out")))
    return {"C_inv": C_inv, "C_OM": C_OM, "R_oper": R_oper, "O_A": O_A}


def _objective_vectors(cfg: PlanningConfig, facs, asm: ModelAssembler):
    """Numerator and denominator of LCOA, both divided by the nominal capacity C_AS."""
    n = asm.n
    s = cfg.C_AS
    inv, om, inv_as, om_as = _investment_coefficients(cfg, facs)
    p = np.zeros(n)
    for k in CAPACITY_KEYS:
        p[asm.index[k][0]] = (inv[k] + om[k]) / s
    w = cfg.annual_factor
    p[asm.index["P_disc"]] = w * cfg.lambda_deg * cfg.dt / s
    p0 = (inv_as + om_as) / s
    q = np.zeros(n)
    q[asm.index["q_out"]] = w * cfg.c_h2a * cfg.dt / s
    return p0, p, q


def _finish(handles: PlantHandles, cfg, facs, prof, kind, p0, p, q0, q, scale, **meta):
    asm = handles.asm
    prob, xc, yc = asm.to_milfp(p0, p, q0, q)
    lo, hi, _ = asm.bounds()
    meta.update({"N": cfg.N, "dt_as": cfg.effective_dt_as, "config_hash": config_hash(cfg, facs, prof),
                 "scalars": {k: True for k in handles.scalars}})
    return ModelInstance(prob, asm.index, asm.names, xc, yc, kind, cfg, facs, prof,
                         asm.matrix(), asm.row_senses(), asm.row_rhs(), lo, hi, scale, meta)


def build_deterministic_model(cfg: PlanningConfig, facs: dict[str, FacilityParams],
                              prof: RenewableProfile, scale_w: float = 1.0,
                              scale_s: float = 1.0) -> ModelInstance:
    """Minimum-LCOA planning model as a MILFP.

    The objective is annualized investment plus O&M plus BESS degradation
    cost, divided by annual ammonia output. Both are divided by ``C_AS`` so the
    Charnes-Cooper scale variable stays near one. ``scale_w``/``scale_s``
    multiply the per-unit availability.
    """
    h = _build_plant(cfg, facs, prof, scale_w=scale_w, scale_s=scale_s)
    p0, p, q = _objective_vectors(cfg, facs, h.asm)
    meta = {} if scale_w == scale_s == 1.0 else {"scale_w": scale_w, "scale_s": scale_s}
    return _finish(h, cfg, facs, prof, "lcoa", p0, p, 0.0, q, 1.0, **meta)


def build_fixed_ras_milp(cfg: PlanningConfig, facs: dict[str, FacilityParams],
                         prof: RenewableProfile, r_as: float) -> ModelInstance:
    """Planning model with annual output pinned to ``r_as·C_AS``; the objective is then linear."""
    if not 0 < r_as <= 1:
        raise ConfigError("fixed utilization must lie in (0, 1]")
    h = _build_plant(cfg, facs, prof)
    p0, p, q = _objective_vectors(cfg, facs, h.asm)
    qc = h.asm.index["q_out"]
    h.asm.add_row("fixed_output", qc, q[qc], "E", r_as)
    return _finish(h, cfg, facs, prof, "fixed_ras", p0, p, r_as, np.zeros_like(q), 1.0,
                   r_as=r_as)


def build_revenue_milp(cfg: PlanningConfig, facs: dict[str, FacilityParams],
                       prof: RenewableProfile, price: float) -> ModelInstance:
    """Maximum annual net revenue ``price·O_A - cost`` posed as minimizing its negation.

    The problem objective times ``C_AS`` is minus the revenue.
    """
    if price < 0 or not math.isfinite(price):
        raise ConfigError("ammonia price must be a nonnegative number")
    h = _build_plant(cfg, facs, prof)
    p0, p, q = _objective_vectors(cfg, facs, h.asm)
    return _finish(h, cfg, facs, prof, "revenue", p0, p - price * q, 1.0, np.zeros_like(q),
                   cfg.C_AS, price=price)


def build_operation_model(capacities: dict[str, float], cfg: PlanningConfig,
                          facs: dict[str, FacilityParams], prof: RenewableProfile,
                          scale_w: float = 1.0, scale_s: float = 1.0) -> ModelInstance:
    """LCOA model with every capacity and unit count pinned by equality rows."""
    pinned = pin_values(capacities, facs)
    h = _build_plant(cfg, facs, prof, scale_w=scale_w, scale_s=scale_s, pinned=pinned)
    p0, p, q = _objective_vectors(cfg, facs, h.asm)
    return _finish(h, cfg, facs, prof, "operation", p0, p, 0.0, q, 1.0,
                   scale_w=scale_w, scale_s=scale_s)


def pin_values(capacities: dict[str, float], facs) -> dict[str, float]:
    """Complete a capacity dict: unit counts from capacities or the reverse."""
    out = {}
    for key in ("W", "S", "AE"):
        c, n = capacities.get(f"C_{key}"), capacities.get(f"N_{key}")
        c0 = facs[key].C0
        if n is None and c is None:
            raise ConfigError(f"capacity of {key} missing")
        if n is None:
            n = c / c0
        if abs(n - round(n)) > 1e-6:
            raise ConfigError(f"C_{key} = {c} is not a whole number of {c0} MW units")
        n = int(round(n))
        out[f"N_{key}"] = n
        out[f"C_{key}"] = n * c0
    for key in ("C_HS", "C_FC", "C_B"):
        if key not in capacities:
            raise ConfigError(f"capacity {key} missing")
        out[key] = float(capacities[key])
    return out
