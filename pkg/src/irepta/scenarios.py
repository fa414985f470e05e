"""Multi-year renewable scenarios from a Markov chain over annual full-load hours,
and the expected-LCOA evaluation of a fixed plan over those scenarios."""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from .errors import ConfigError, DataError, InfeasibleError
from .io import _reader, _writer
from .milfp import BnbConfig
from .model.params import FacilityParams, PlanningConfig, RenewableProfile
from .model.plan import PlanResult, simulate_operation
from .model.profiles import SOLAR_FLH, WIND_FLH

log = logging.getLogger(__name__)

HISTORY_HEADER = ("year", "flh_wind", "flh_solar")
SCENARIO_HEADER = ("s", "f_w", "f_s", "dlcoa")
WIND_RANGE = (-0.0726, 0.0739)
SOLAR_RANGE = (-0.0324, 0.0293)


@dataclass
class HistoricalFlh:
    """Annual full-load hours of wind and solar, one entry per year."""

    years: np.ndarray
    flh_wind: np.ndarray
    flh_solar: np.ndarray

    def __post_init__(self):
        self.years = np.asarray(self.years, dtype=int)
        self.flh_wind = np.asarray(self.flh_wind, dtype=float)
        self.flh_solar = np.asarray(self.flh_solar, dtype=float)
        if not (self.years.size == self.flh_wind.size == self.flh_solar.size):
            raise DataError("history columns differ in length")
        if self.years.size < 2:
            raise DataError("history needs at least two years")
        for v in (self.flh_wind, self.flh_solar):
            if np.any(~np.isfinite(v)) or np.any(v <= 0):
                raise DataError("full-load hours must be positive")

    def __len__(self) -> int:
        return self.years.size

    @property
    def base(self) -> tuple[float, float]:
        return float(self.flh_wind.mean()), float(self.flh_solar.mean())

    def deviations(self) -> tuple[np.ndarray, np.ndarray]:
        """Relative deviation of each year from the multi-year average."""
        bw, bs = self.base
        return self.flh_wind / bw - 1.0, self.flh_solar / bs - 1.0

    def exclude(self, years) -> "HistoricalFlh":
        keep = ~np.isin(self.years, np.asarray(list(years), dtype=int))
        return HistoricalFlh(self.years[keep], self.flh_wind[keep], self.flh_solar[keep])


@dataclass
class ResourceChain:
    """First-order chain over quantile bins of relative FLH deviation."""

    edges: np.ndarray
    values: np.ndarray
    P: np.ndarray
    counts: np.ndarray

    @property
    def n_states(self) -> int:
        return self.values.size

    def factors(self, states: np.ndarray) -> np.ndarray:
        return 1.0 + self.values[states]


@dataclass
class MarkovChainModel:
    wind: ResourceChain
    solar: ResourceChain
    meta: dict = field(default_factory=dict)


def _fit_chain(x: np.ndarray, n_states: int, name: str) -> ResourceChain:
    if np.ptp(x) == 0:
        warnings.warn(f"{name} history is constant; using a single absorbing state",
                      stacklevel=3)
        return ResourceChain(np.array([x[0], x[0]]), np.array([x[0]]), np.ones((1, 1)),
                             np.array([[x.size - 1]], dtype=float))
    edges = np.quantile(x, np.linspace(0.0, 1.0, n_states + 1))
    states = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, n_states - 1)
    counts = np.zeros((n_states, n_states))
    np.add.at(counts, (states[:-1], states[1:]), 1.0)
    smoothed = counts + 1.0
    P = smoothed / smoothed.sum(axis=1, keepdims=True)
    values = 0.5 * (edges[:-1] + edges[1:])
    return ResourceChain(edges, values, P, counts)


def fit_markov_chain(hist: HistoricalFlh, n_states: int = 5,
                     exclude_years=()) -> MarkovChainModel:
    """Fit independent wind and solar chains to annual FLH deviations.

    States are quantile bins of the relative deviation from the multi-year
    average, represented by their midpoints. Transition counts between
    consecutive years get one pseudo-count per cell before the rows are
    normalized. A constant series gives a single absorbing state and a
    warning.
    """
    if n_states < 2:
        raise ConfigError("need at least two states")
    if exclude_years:
        hist = hist.exclude(exclude_years)
    if len(hist) < n_states:
        raise DataError(f"{len(hist)} years of history cannot support {n_states} states")
    dw, ds = hist.deviations()
    return MarkovChainModel(
        _fit_chain(dw, n_states, "wind"), _fit_chain(ds, n_states, "solar"),
        {"n_states": n_states, "n_years": len(hist), "excluded": list(exclude_years),
         "base": hist.base},
    )


@dataclass
class ScenarioSet:
    """Annual scaling factors ``(f_w, f_s)``, one pair per sampled year."""

    f_w: np.ndarray
    f_s: np.ndarray
    seed: int | None = None
    states_w: np.ndarray | None = None
    states_s: np.ndarray | None = None
    burn_in: int = 0

    def __post_init__(self):
        self.f_w = np.asarray(self.f_w, dtype=float)
        self.f_s = np.asarray(self.f_s, dtype=float)
        if self.f_w.shape != self.f_s.shape:
            raise DataError("factor vectors differ in length")
        if np.any(self.f_w <= 0) or np.any(self.f_s <= 0):
            raise DataError("scenario factors must be positive")

    def __len__(self) -> int:
        return self.f_w.size


def _walk(chain: ResourceChain, n: int, burn_in: int, rng: np.random.Generator) -> np.ndarray:
    cum = np.cumsum(chain.P, axis=1)
    cum[:, -1] = 1.0
    u = rng.random(burn_in + n)
    s = int(rng.integers(chain.n_states))
    out = np.empty(n, dtype=int)
    for i in range(burn_in + n):
        s = int(np.searchsorted(cum[s], u[i], side="right"))
        if i >= burn_in:
            out[i - burn_in] = s
    return out


def sample_scenarios(model: MarkovChainModel, n_scenarios: int, seed: int = 0,
                     burn_in: int = 100) -> ScenarioSet:
    """Walk both chains from a random start; one factor pair per step after burn-in."""
    if n_scenarios < 0 or burn_in < 0:
        raise ConfigError("scenario count and burn-in must be nonnegative")
    rw, rs = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    sw = _walk(model.wind, n_scenarios, burn_in, rw)
    ss = _walk(model.solar, n_scenarios, burn_in, rs)
    return ScenarioSet(model.wind.factors(sw), model.solar.factors(ss), seed, sw, ss, burn_in)


def transition_frequencies(states: np.ndarray, n_states: int) -> np.ndarray:
    """Row-normalized transition counts of a state path (rows never visited stay zero)."""
    counts = np.zeros((n_states, n_states))
    np.add.at(counts, (states[:-1], states[1:]), 1.0)
    tot = counts.sum(axis=1, keepdims=True)
    return np.divide(counts, tot, out=np.zeros_like(counts), where=tot > 0)


@dataclass
class ScaledProfile:
    profile: RenewableProfile
    ratio_w: float
    ratio_s: float
    clipped: bool


def scale_profile(base: RenewableProfile, f_w: float, f_s: float) -> ScaledProfile:
    """Multiply the per-unit profiles by annual factors and clip to ``[0, 1]``.

    The achieved FLH ratios are reported; they fall short of the requested
    factors only where clipping binds.
    """
    if f_w < 0 or f_s < 0:
        raise ConfigError("scaling factors must be nonnegative")
    w_raw, s_raw = base.p_w_sta * f_w, base.p_s_sta * f_s
    w, s = np.minimum(w_raw, 1.0), np.minimum(s_raw, 1.0)
    clipped = bool(np.any(w_raw > 1.0) or np.any(s_raw > 1.0))

    def ratio(new, old):
        return float(new.sum() / old.sum()) if old.sum() > 0 else float("nan")

    rw, rs = ratio(w, base.p_w_sta), ratio(s, base.p_s_sta)
    if clipped:
        log.info("profile clipped at 1: requested (%.4g, %.4g), achieved (%.4g, %.4g)",
                 f_w, f_s, rw, rs)
    return ScaledProfile(RenewableProfile(w, s, base.dt), rw, rs, clipped)


@dataclass
class PosterioriResult:
    """Expected LCOA of a fixed plan over sampled years.

    ``dlcoa`` has one entry per scenario (``nan`` where infeasible and
    excluded); ``distribution`` is the subset entering the mean, in scenario
    order, and ``elcoa`` is its arithmetic mean.
    """

    elcoa: float
    dlcoa: np.ndarray
    distribution: np.ndarray
    feasible: np.ndarray
    n_infeasible: int
    n_unique: int


def posteriori_elcoa(plan: PlanResult, scen: ScenarioSet, cfg: PlanningConfig,
                     facs: dict[str, FacilityParams], base_prof: RenewableProfile,
                     bnb: BnbConfig | None = None, infeasible: str = "exclude",
                     penalty: float | None = None, workers: int = 1) -> PosterioriResult:
    """Simulate the plan on every scenario and average the resulting LCOAs.

    Identical factor pairs are simulated once. Infeasible scenarios are
    dropped from the mean (``infeasible="exclude"``) or assigned ``penalty``
    (``infeasible="penalty"``); either way they are counted.
    """
    if infeasible not in ("exclude", "penalty"):
        raise ConfigError("infeasible must be 'exclude' or 'penalty'")
    if infeasible == "penalty" and (penalty is None or not math.isfinite(penalty)):
        raise ConfigError("penalty mode needs a finite penalty value")
    caps = plan.pinned_capacities()
    pairs = list(dict.fromkeys(zip(scen.f_w.tolist(), scen.f_s.tolist())))

    def run(pair):
        sp_ = scale_profile(base_prof, *pair)
        try:
            return simulate_operation(caps, cfg, facs, sp_.profile, bnb=bnb).dlcoa
        except InfeasibleError:
            return math.nan

    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            values = list(ex.map(run, pairs))
    else:
        values = [run(p) for p in pairs]
    lookup = dict(zip(pairs, values))
    dl = np.array([lookup[p] for p in zip(scen.f_w.tolist(), scen.f_s.tolist())], dtype=float)
    feasible = np.isfinite(dl)
    n_inf = int((~feasible).sum())
    if n_inf:
        log.warning("%d of %d scenarios infeasible for this plan", n_inf, dl.size)
    if infeasible == "penalty":
        dl = np.where(feasible, dl, penalty)
        dist = dl.copy()
    else:
        dist = dl[feasible]
    elcoa = float(np.mean(dist)) if dist.size else math.nan
    return PosterioriResult(elcoa, dl, dist, feasible, n_inf, len(pairs))


def synthetic_history(n_years: int = 20, seed: int = 0, base_wind: float = WIND_FLH,
                      base_solar: float = SOLAR_FLH, wind_range=WIND_RANGE,
                      solar_range=SOLAR_RANGE, phi: float = 0.3,
                      start_year: int = 2001) -> HistoricalFlh:
    """Autocorrelated annual FLH series confined to relative deviation envelopes.

    A Gaussian AR(1) sequence is mapped through the normal CDF onto each
    ``(lo, hi)`` range of relative deviation around the base FLH.
    """
    if n_years < 2:
        raise ConfigError("need at least two years")
    if not -1 < phi < 1:
        raise ConfigError("AR coefficient must lie in (-1, 1)")
    rng = np.random.default_rng(seed)

    def series(lo, hi):
        if not lo < 0 < hi:
            raise ConfigError("deviation range must straddle zero")
        z = np.empty(n_years)
        z[0] = rng.standard_normal()
        e = rng.standard_normal(n_years) * math.sqrt(1 - phi ** 2)
        for t in range(1, n_years):
            z[t] = phi * z[t - 1] + e[t]
        return lo + (hi - lo) * ndtr(z)

    dw = series(*wind_range)
    ds = series(*solar_range)
    years = np.arange(start_year, start_year + n_years)
    return HistoricalFlh(years, base_wind * (1 + dw), base_solar * (1 + ds))


def read_history(path: str | Path) -> HistoricalFlh:
    fh, reader, idx = _reader(path, HISTORY_HEADER)
    rows = []
    with fh:
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append((int(row[idx[0]]), float(row[idx[1]]), float(row[idx[2]])))
            except (ValueError, IndexError):
                raise DataError(f"{path}:{line_no}: malformed history row") from None
    if not rows:
        raise DataError(f"{path}: no history rows")
    y, w, s = zip(*rows)
    return HistoricalFlh(np.array(y), np.array(w), np.array(s))


def write_history(hist: HistoricalFlh, path: str | Path, comment: str | None = None) -> None:
    fh, w = _writer(path, HISTORY_HEADER, comment)
    with fh:
        for y, a, b in zip(hist.years, hist.flh_wind, hist.flh_solar):
            w.writerow([int(y), repr(float(a)), repr(float(b))])


def write_scenarios(scen: ScenarioSet, dlcoa: np.ndarray | None, path: str | Path,
                    comment: str | None = None) -> None:
    """Empty ``dlcoa`` cells mark infeasible (or not yet simulated) scenarios."""
    dl = np.full(len(scen), np.nan) if dlcoa is None else np.asarray(dlcoa, dtype=float)
    fh, w = _writer(path, SCENARIO_HEADER, comment)
    with fh:
        for s, (a, b, c) in enumerate(zip(scen.f_w, scen.f_s, dl)):
            w.writerow([s, repr(float(a)), repr(float(b)), "" if math.isnan(c) else repr(float(c))])


def read_scenarios(path: str | Path) -> tuple[ScenarioSet, np.ndarray]:
    fh, reader, idx = _reader(path, SCENARIO_HEADER)
    fw, fs, dl = [], [], []
    with fh:
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                fw.append(float(row[idx[1]]))
                fs.append(float(row[idx[2]]))
                cell = row[idx[3]].strip()
                dl.append(float(cell) if cell else math.nan)
            except (ValueError, IndexError):
                raise DataError(f"{path}:{line_no}: malformed scenario row") from None
    return ScenarioSet(fw, fs), np.array(dl)
