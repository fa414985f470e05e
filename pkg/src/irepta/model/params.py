"""Physical and economic parameters of the plant."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from ..errors import ConfigError

FACILITIES = ("W", "S", "AE", "FC", "HS", "AS", "B")
# capacities are MW / MWh while unit costs are quoted per kW / kWh
COST_UNIT = {"W": 1000.0, "S": 1000.0, "AE": 1000.0, "FC": 1000.0, "B": 1000.0,
             "HS": 1.0, "AS": 1.0}
HOURS_PER_YEAR = 8760.0


def crf(r: float, Y: float) -> float:
    """Capital recovery factor ``r(1+r)^Y / ((1+r)^Y - 1)``; ``1/Y`` at ``r = 0``."""
    if r < 0 or Y < 1:
        raise ConfigError(f"crf needs r >= 0 and Y >= 1, got r={r}, Y={Y}")
    if r == 0:
        return 1.0 / Y
    g = (1.0 + r) ** Y
    return r * g / (g - 1.0)


@dataclass
class FacilityParams:
    """One facility type.

    ``I_init`` is per kW (W, S, AE, FC), per kWh (B), per Nm³ (HS) or per
    t/yr of nominal output (AS). ``eta_lo``/``eta_hi`` are the operating range
    (power for AE/FC, hydrogen flow for AS, stored content for HS/B).
    ``kappa`` is kWh per Nm³ H₂ for AE, FC and AS.
    """

    id: str
    I_init: float
    I_OM: float
    Y: float
    C0: float | None = None
    eta_lo: float = 0.0
    eta_hi: float = 1.0
    kappa: float | None = None

    def validate(self) -> None:
        if self.id not in FACILITIES:
            raise ConfigError(f"unknown facility {self.id!r}")
        if not 0.0 <= self.eta_lo <= self.eta_hi <= 1.0:
            raise ConfigError(f"{self.id}: need 0 <= eta_lo <= eta_hi <= 1")
        if self.Y < 1:
            raise ConfigError(f"{self.id}: lifetime must be >= 1 year")
        if self.I_init < 0 or self.I_OM < 0:
            raise ConfigError(f"{self.id}: costs must be nonnegative")
        if self.id in ("W", "S", "AE") and not (self.C0 and self.C0 > 0):
            raise ConfigError(f"{self.id}: standard unit size C0 must be positive")
        if self.id in ("AE", "FC", "AS") and not (self.kappa and self.kappa > 0):
            raise ConfigError(f"{self.id}: conversion coefficient kappa must be positive")

    def annualized(self, r: float) -> float:
        """Yearly cost per MW / MWh / Nm³ / t of capacity (capital recovery plus O&M)."""
        return (crf(r, self.Y) + self.I_OM) * self.I_init * COST_UNIT[self.id]


def default_facilities() -> dict[str, FacilityParams]:
    """Default facility data.

    Standard sizes, BESS and PEMFC figures follow the reference case; the
    remaining costs and ranges are representative values for alkaline
    electrolysis and Haber-Bosch synthesis and can be overridden in the
    config file.
    """
    facs = [
        FacilityParams("W", I_init=4000.0, I_OM=0.02, Y=20, C0=6.25),
        FacilityParams("S", I_init=2500.0, I_OM=0.01, Y=25, C0=3.15),
        FacilityParams("AE", I_init=2000.0, I_OM=0.02, Y=20, C0=5.0,
                       eta_lo=0.10, eta_hi=1.0, kappa=5.0),
        FacilityParams("FC", I_init=5000.0, I_OM=0.02, Y=15, eta_lo=0.0, eta_hi=1.0, kappa=1.5),
        FacilityParams("HS", I_init=300.0, I_OM=0.01, Y=20, eta_lo=0.05, eta_hi=1.0),
        FacilityParams("AS", I_init=6000.0, I_OM=0.02, Y=20, eta_lo=0.30, eta_hi=1.0,
                       kappa=0.3),
        FacilityParams("B", I_init=1800.0, I_OM=0.01, Y=15, eta_lo=0.10, eta_hi=0.90),
    ]
    return {f.id: f for f in facs}


@dataclass
class CapacityBounds:
    N_W: int = 64
    N_S: int = 64
    N_AE: int = 40
    C_HS: float = 1e6
    C_FC: float = 50.0
    C_B: float = 200.0


@dataclass
class PlanningConfig:
    """Horizon, ammonia synthesis, storage and economic settings.

    Operation terms (ammonia output, BESS degradation cost, electrolyzer full
    load hours) are scaled by ``8760 / (N·dt)`` so that a short horizon
    represents a year; with ``N·dt = 8760`` the factor is exactly one.
    """

    N: int = 168
    dt: float = 1.0
    dt_as: float = 24.0
    t_trans: float = 2.0
    C_AS: float = 1e5
    c_h2a: float = 5.06e-4
    r: float = 0.08
    lambda_deg: float = 50.0
    H_B: float = 2.0
    M_B: float | None = None
    xi_B: float = 0.0002
    eta_B: float = 0.95
    soc_boundary: float = 0.5
    ramp_down: float = -0.2
    ramp_up: float = 0.2
    relax_bess_binaries: bool = False
    annualize: bool = True
    bounds: CapacityBounds = field(default_factory=CapacityBounds)

    def validate(self) -> None:
        if self.N < 1 or self.dt <= 0:
            raise ConfigError("horizon N must be >= 1 and dt > 0")
        if self.c_h2a <= 0:
            raise ConfigError("c_h2a must be positive")
        if not 0 < self.r < 1:
            raise ConfigError("interest rate must be in (0, 1)")
        if not self.ramp_down <= 0 <= self.ramp_up:
            raise ConfigError("need ramp_down <= 0 <= ramp_up")
        if self.dt_as <= 0 or not _is_multiple(self.dt_as, self.dt):
            raise ConfigError("dt_as must be a positive multiple of dt")
        span = self.effective_dt_as
        if not _is_multiple(self.N * self.dt, span):
            raise ConfigError(
                f"scheduling period {self.dt_as} h does not divide the horizon {self.N * self.dt} h")
        if self.t_trans < 0:
            raise ConfigError("t_trans must be >= 0")
        if not 0 < self.eta_B <= 1 or not 0 <= self.xi_B < 1:
            raise ConfigError("BESS efficiency / self-discharge out of range")
        if self.H_B <= 0 or self.C_AS <= 0:
            raise ConfigError("H_B and C_AS must be positive")

    @property
    def horizon_hours(self) -> float:
        return self.N * self.dt

    @property
    def effective_dt_as(self) -> float:
        """Scheduling period clamped to the horizon (one period if longer)."""
        return min(self.dt_as, self.horizon_hours)

    @property
    def steps_per_period(self) -> int:
        return int(round(self.effective_dt_as / self.dt))

    @property
    def n_periods(self) -> int:
        return self.N // self.steps_per_period

    @property
    def annual_factor(self) -> float:
        return HOURS_PER_YEAR / self.horizon_hours if self.annualize else 1.0

    @property
    def q_rated(self) -> float:
        """Rated hydrogen intake of synthesis (Nm³/h) under 8000 full-load hours."""
        return self.C_AS / (8000.0 * self.c_h2a)

    @property
    def big_m(self) -> float:
        return self.M_B if self.M_B is not None else self.bounds.C_B / self.H_B

    def with_(self, **kw) -> "PlanningConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PlanningConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown planning keys: {sorted(unknown)}")
        if "bounds" in d and isinstance(d["bounds"], dict):
            d["bounds"] = CapacityBounds(**d["bounds"])
        return cls(**d)


def _is_multiple(a: float, b: float) -> bool:
    q = a / b
    return abs(q - round(q)) < 1e-9 and round(q) >= 1


@dataclass
class RenewableProfile:
    """Per-unit wind and solar availability on the planning grid."""

    p_w_sta: np.ndarray
    p_s_sta: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        self.p_w_sta = np.asarray(self.p_w_sta, dtype=float).ravel()
        self.p_s_sta = np.asarray(self.p_s_sta, dtype=float).ravel()
        self.validate()

    def validate(self) -> None:
        if self.p_w_sta.size != self.p_s_sta.size:
            raise ConfigError("wind and solar profiles differ in length")
        for v in (self.p_w_sta, self.p_s_sta):
            if np.any(~np.isfinite(v)) or np.any(v < 0) or np.any(v > 1):
                raise ConfigError("per-unit profile values must lie in [0, 1]")

    @property
    def N(self) -> int:
        return self.p_w_sta.size

    def flh(self) -> tuple[float, float]:
        """Full-load hours over the profile (wind, solar)."""
        return float(self.p_w_sta.sum() * self.dt), float(self.p_s_sta.sum() * self.dt)

    def head(self, n: int) -> "RenewableProfile":
        return RenewableProfile(self.p_w_sta[:n], self.p_s_sta[:n], self.dt)


def config_hash(cfg: PlanningConfig, facs: dict[str, FacilityParams],
                prof: RenewableProfile | None = None) -> str:
    h = hashlib.sha256()
    h.update(json.dumps(cfg.to_dict(), sort_keys=True, default=float).encode())
    h.update(json.dumps({k: asdict(v) for k, v in sorted(facs.items())},
                        sort_keys=True).encode())
    if prof is not None:
        h.update(prof.p_w_sta.tobytes())
        h.update(prof.p_s_sta.tobytes())
    return h.hexdigest()[:16]
