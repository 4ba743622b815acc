"""
Synthetic markets: i.i.d. Gaussian, within-day AR(1) and HAR-cascade volatility.

Every day draws from its own PCG64 substream keyed by (seed, day index), so
generating days in parallel or serially gives the same panel bit for bit.
"""

import datetime
import numpy as np
import pandas as pd

from scipy.signal import lfilter
from scipy.special import ndtri
from typing import Optional, Tuple, Union

from serialvol.types.options import Horizon, SimModel
from serialvol.types.models import SimSpec, SimPanel
from serialvol.lib.exceptions import InvalidSpec, TooShort
from serialvol.utils.logs import default_logger as logger
from serialvol.utils.pooler import ThreadPooler

_INTRADAY_STREAM = 0
_PATH_STREAM = 1
_MANTISSA = 2 ** 53


def business_dates(start: Union[datetime.date, str], days: int) -> pd.DatetimeIndex:
    """
    `days` consecutive weekdays starting at (or after) `start`.

    Built from day-resolution datetime64, so long panels run past the
    nanosecond limit of 2262 without overflowing.
    """
    first = np.busday_offset(np.datetime64(pd.Timestamp(start).date(), 'D'), 0, roll = 'forward')
    return pd.DatetimeIndex(np.busday_offset(first, np.arange(days)).astype('datetime64[s]'))


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *key])))


def standard_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    """
    Inverse-CDF normals from uniforms (k + 0.5) / 2^53 on the open unit interval
    """
    k = rng.integers(0, _MANTISSA, size = size, dtype = np.int64)
    return ndtri((k + 0.5) / _MANTISSA)


def _day_normals(day: int, seed: int, size: int) -> np.ndarray:
    return standard_normals(substream(seed, _INTRADAY_STREAM, day), size)


def _normal_panel(spec: SimSpec, workers: Optional[int] = None) -> np.ndarray:
    rows = ThreadPooler.map(_day_normals, range(spec.days), spec.seed, spec.returns_per_day, workers = workers)
    return np.vstack(rows)


def _check_model(spec: SimSpec, model: SimModel):
    if spec.model != model:
        raise InvalidSpec(f'spec is for {spec.model.value}, not {model.value}')


def gen_iid(spec: SimSpec, workers: Optional[int] = None) -> SimPanel:
    """
    returns_per_day i.i.d. Normal(0, sigma) returns per day
    """
    _check_model(spec, SimModel.iid_gaussian)
    dates = business_dates(spec.start_date, spec.days)
    if spec.sigma == 0:
        return SimPanel(dates = dates, returns = np.zeros((spec.days, spec.returns_per_day)))
    return SimPanel(dates = dates, returns = spec.sigma * _normal_panel(spec, workers))


def gen_ar1(spec: SimSpec, workers: Optional[int] = None) -> SimPanel:
    """
    Within-day AR(1) x_t = phi x_{t-1} + e_t, started from the stationary
    distribution; days are independent. phi = 0 reproduces gen_iid exactly.
    """
    _check_model(spec, SimModel.ar1)
    dates = business_dates(spec.start_date, spec.days)
    if spec.sigma == 0:
        return SimPanel(dates = dates, returns = np.zeros((spec.days, spec.returns_per_day)))
    shocks = spec.sigma * _normal_panel(spec, workers)
    shocks[:, 0] = shocks[:, 0] / np.sqrt(1.0 - spec.phi ** 2)
    returns = lfilter([1.0], [1.0, -spec.phi], shocks, axis = 1)
    return SimPanel(dates = dates, returns = returns)


def har_log_variance_path(spec: SimSpec) -> np.ndarray:
    """
    Daily log variance following the HAR recursion with Gaussian shocks.

    Starts from the fixed point beta0 / (1 - beta_d - beta_w - beta_m) and
    drops `burn_in` days; returns `days` values.
    """
    history = int(Horizon.monthly)
    total = history + spec.burn_in + spec.days
    shocks = spec.noise_sd * standard_normals(substream(spec.seed, _PATH_STREAM), total - history)
    h = np.empty(total)
    h[:history] = spec.fixed_point
    for t in range(history, total):
        h[t] = (
            spec.beta0
            + spec.beta_d * h[t - 1]
            + spec.beta_w * np.mean(h[t - 5:t])
            + spec.beta_m * np.mean(h[t - history:t])
            + shocks[t - history]
        )
    return h[history + spec.burn_in:]


def gen_har_cascade(spec: SimSpec, workers: Optional[int] = None) -> SimPanel:
    """
    Intraday returns Normal(0, sqrt(exp(h_t) / n)) around a HAR log-variance
    path h_t. The panel carries the path as `log_variance`.
    """
    _check_model(spec, SimModel.har_cascade)
    dates = business_dates(spec.start_date, spec.days)
    path = har_log_variance_path(spec)
    scale = np.sqrt(np.exp(path) / spec.returns_per_day)
    returns = _normal_panel(spec, workers) * scale[:, None]
    return SimPanel(dates = dates, returns = returns, log_variance = pd.Series(path, index = dates, name = 'log_variance'))


_GENERATORS = {
    SimModel.iid_gaussian: gen_iid,
    SimModel.ar1: gen_ar1,
    SimModel.har_cascade: gen_har_cascade,
}


def gen_panel(spec: SimSpec, workers: Optional[int] = None) -> SimPanel:
    logger.status('simulate', f'{spec.model.value}: {spec.days} days x {spec.returns_per_day} returns, seed {spec.seed}')
    return _GENERATORS[spec.model](spec, workers = workers)


def pooled_autocorrelation(panel: np.ndarray, lag: int = 1) -> float:
    """
    Within-day lag autocorrelation pooled over days (returns are not demeaned).
    Pairs never straddle two days.
    """
    panel = np.atleast_2d(np.asarray(panel, dtype = float))
    if lag < 1 or panel.shape[1] <= lag:
        raise TooShort(f'lag must be in [1, {panel.shape[1] - 1}], got {lag}')
    cross = np.mean(panel[:, lag:] * panel[:, :-lag])
    return float(cross / np.mean(panel * panel))


def sample_autocorrelation(x: np.ndarray, lag: int = 1) -> float:
    x = np.asarray(x, dtype = float)
    if lag < 1 or x.size <= lag:
        raise TooShort(f'lag must be in [1, {x.size - 1}], got {lag}')
    dev = x - np.mean(x)
    return float(np.sum(dev[lag:] * dev[:-lag]) / np.sum(dev * dev))
