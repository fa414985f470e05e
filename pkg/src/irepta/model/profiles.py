"""Synthetic per-unit wind and solar profiles for desk-scale studies."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtr

from ..errors import ConfigError
from .params import HOURS_PER_YEAR, RenewableProfile

WIND_FLH = 3658.0
SOLAR_FLH = 1721.0


def _match_mean(raw: np.ndarray, target: float, cap: float) -> np.ndarray:
    # raise raw in [0, 1] to a power so that the mean hits the target
    def gap(log_g):
        return np.mean(cap * raw ** np.exp(log_g)) - target
    lo, hi = -8.0, 8.0
    if gap(lo) < 0 or gap(hi) > 0:
        raise ConfigError("target capacity factor cannot be reached by the profile shape")
    return cap * raw ** np.exp(brentq(gap, lo, hi, xtol=1e-14))


def synthetic_profile(N: int = 168, dt: float = 1.0, seed: int = 0,
                      wind_flh: float = WIND_FLH, solar_flh: float = SOLAR_FLH,
                      cap: float = 0.95) -> RenewableProfile:
    """Correlated wind and diurnal solar availability with given annual full-load hours.

    Wind is a monotone transform of a Gaussian AR(1) series. Solar is a
    clear-sky half sine between 6:00 and 18:00 times a daily cloud factor.
    Both are shaped to average ``flh / 8760`` and never exceed ``cap``.
    """
    if N < 1 or dt <= 0:
        raise ConfigError("need N >= 1 and dt > 0")
    rng = np.random.default_rng(seed)
    phi = 0.9 ** dt
    z = np.empty(N)
    z[0] = rng.standard_normal()
    eps = rng.standard_normal(N) * np.sqrt(1.0 - phi ** 2)
    for t in range(1, N):
        z[t] = phi * z[t - 1] + eps[t]
    wind = _match_mean(ndtr(z), wind_flh / HOURS_PER_YEAR, cap)

    hour = (np.arange(N) * dt) % 24.0
    clear = np.sin(np.pi * (hour - 6.0) / 12.0)
    # sin(pi) is 1e-16, not zero; left alone it becomes a 1e-50 coefficient
    clear = np.where(clear > 1e-9, clear, 0.0)
    day = (np.arange(N) * dt // 24.0).astype(int)
    cloud = rng.uniform(0.4, 1.0, day.max() + 1)[day]
    solar_raw = clear * cloud
    target = solar_flh / HOURS_PER_YEAR
    if solar_raw.max() <= 0:
        solar = np.zeros(N)
    else:
        solar = _match_mean(solar_raw / solar_raw.max(), target, cap)
    return RenewableProfile(wind, solar, dt)
