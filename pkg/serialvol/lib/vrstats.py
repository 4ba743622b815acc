"""
Intraday overlapped variance ratio with the power transformation
"""

import math
import functools
import numpy as np

from numpy.lib.stride_tricks import sliding_window_view
from typing import Dict, Iterable, List, Union
from serialvol.types.models import DayGrid, DailyMetrics, VrStat
from serialvol.lib.exceptions import (
    DataError,
    DegenerateDay,
    EmptyInput,
    NonFiniteReturn,
    SingularLambda,
    TooShort,
)
from serialvol.utils.helpers import timed

ArrayLike = Union[Iterable[float], np.ndarray]


def _as_returns(returns: ArrayLike) -> np.ndarray:
    r = np.asarray(returns, dtype = float)
    if r.ndim != 1:
        raise TooShort(f'returns must be one-dimensional, got shape {r.shape}')
    return r


def _is_constant(r: np.ndarray) -> bool:
    return bool(r.size) and bool(np.all(r == r[0]))


def sample_mean(returns: ArrayLike) -> float:
    r = _as_returns(returns)
    if r.size == 0:
        raise EmptyInput('cannot take the mean of an empty return vector')
    if _is_constant(r): return float(r[0])
    return float(np.mean(r))


def variance_a(returns: ArrayLike) -> float:
    """
    One-period variance with the 1 / (n - 1) normalization
    """
    r = _as_returns(returns)
    if r.size < 2:
        raise TooShort(f'variance needs at least 2 returns, got {r.size}')
    if _is_constant(r): return 0.0
    dev = r - sample_mean(r)
    return float(np.sum(dev * dev) / (r.size - 1))


def overlap_count(n: int, q: int) -> float:
    """
    m = q (n - q + 1) (1 - q / n)
    """
    return q * (n - q + 1) * (1.0 - q / n)


def variance_c(returns: ArrayLike, q: int) -> tuple:
    """
    Normalized variance of the overlapping q-period sums.

    Returns (sigma_c2, m).
    """
    r = _as_returns(returns)
    if q < 1:
        raise TooShort(f'aggregation level q must be at least 1, got {q}')
    if r.size < 2 * q:
        raise TooShort(f'need n >= 2q, got n={r.size}, q={q}', q = q)
    m = overlap_count(r.size, q)
    if _is_constant(r): return 0.0, m
    sums = sliding_window_view(r, q).sum(axis = 1)
    dev = sums - q * sample_mean(r)
    return float(np.sum(dev * dev) / m), m


def dirichlet_kernel(k: int, lam: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    W_k(lambda) = (1 / k) sin^2(k lambda / 2) / sin^2(lambda / 2)

    Accepts a scalar or an array of frequencies.
    """
    if k < 1:
        raise TooShort(f'kernel order must be at least 1, got {k}')
    lam_arr = np.asarray(lam, dtype = float)
    wrapped = np.abs(np.remainder(lam_arr + math.pi, 2 * math.pi) - math.pi)
    if np.any(wrapped < 1e-12):
        raise SingularLambda(f'sin(lambda / 2) vanishes at lambda = {lam}')
    half = lam_arr / 2.0
    value = np.sin(k * half) ** 2 / np.sin(half) ** 2 / k
    return float(value) if value.ndim == 0 else value


@functools.lru_cache(maxsize = 256)
def beta_exponent(n: int, q: int) -> float:
    """
    beta = 1 - (2/3) S1 S3 / S2^2 with S_p the sum of W_q(2 pi j / n)^p
    over j = 1..floor((n - 1) / 2). Depends on (n, q) only.
    """
    if n < 3:
        raise TooShort(f'beta needs n >= 3, got {n}')
    if q < 1:
        raise TooShort(f'aggregation level q must be at least 1, got {q}')
    # W_q vanishes at every Fourier frequency 2 pi j / n when n divides q
    if q % n == 0:
        raise SingularLambda(f'kernel weights vanish at every Fourier frequency for n={n}, q={q}', q = q)
    j = np.arange(1, (n - 1) // 2 + 1)
    w = dirichlet_kernel(q, 2.0 * math.pi * j / n)
    s1 = math.fsum(w)
    s2 = math.fsum(w ** 2)
    s3 = math.fsum(w ** 3)
    return 1.0 - (2.0 / 3.0) * s1 * s3 / (s2 * s2)


def asymptotic_sd(n: int, q: int) -> float:
    """
    beta * sqrt(2 (2q - 1)(q - 1) / (3 q n)); diagnostics only
    """
    return beta_exponent(n, q) * math.sqrt(2.0 * (2 * q - 1) * (q - 1) / (3.0 * q * n))


def variance_ratio(returns: ArrayLike, q: int) -> VrStat:
    """
    VR(q) = (sigma_c2 / sigma_a2) ** beta for one day's returns.

    Raises DegenerateDay when the one-period variance is zero.
    """
    r = _as_returns(returns)
    if not np.all(np.isfinite(r)):
        raise NonFiniteReturn('returns contain non-finite values', q = q)
    sigma_c2, m = variance_c(r, q)
    sigma_a2 = variance_a(r)
    if sigma_a2 == 0:
        raise DegenerateDay('one-period variance is zero', q = q)
    beta = beta_exponent(r.size, q)
    return VrStat(
        q = q,
        n = r.size,
        vr = (sigma_c2 / sigma_a2) ** beta,
        beta = beta,
        sigma_a2 = sigma_a2,
        sigma_c2 = sigma_c2,
        m = m,
        asymptotic_sd = asymptotic_sd(r.size, q),
    )


@timed
def variance_ratio_panel(panel: np.ndarray, q: int, chunk_size: int = 8192) -> np.ndarray:
    """
    VR(q) for every row of a days x n return array. Degenerate rows give NaN.
    """
    panel = np.asarray(panel, dtype = float)
    if panel.ndim != 2:
        raise TooShort(f'panel must be two-dimensional, got shape {panel.shape}')
    days, n = panel.shape
    if n < 2 * q:
        raise TooShort(f'need n >= 2q, got n={n}, q={q}', q = q)
    beta = beta_exponent(n, q)
    m = overlap_count(n, q)
    out = np.empty(days, dtype = float)
    for start in range(0, days, chunk_size):
        block = panel[start:start + chunk_size]
        mu = np.mean(block, axis = 1)
        dev = block - mu[:, None]
        sigma_a2 = np.sum(dev * dev, axis = 1) / (n - 1)
        sums = sliding_window_view(block, q, axis = 1).sum(axis = 2)
        dev_c = sums - q * mu[:, None]
        sigma_c2 = np.sum(dev_c * dev_c, axis = 1) / m
        constant = np.all(block == block[:, :1], axis = 1)
        with np.errstate(divide = 'ignore', invalid = 'ignore'):
            vr = (sigma_c2 / sigma_a2) ** beta
        vr[constant | ~np.isfinite(vr)] = np.nan
        out[start:start + chunk_size] = vr
    return out


def daily_metrics(day: DayGrid, q_list: Iterable[int]) -> DailyMetrics:
    """
    Realized variance, its log and VR(q) for each q of one accepted day
    """
    from serialvol.lib.realized import realized_variance
    vr: Dict[int, float] = {}
    for q in q_list:
        try:
            vr[q] = variance_ratio(day.returns, q).vr
        except DataError as e:
            raise e.with_context(date = day.date)
    rv = realized_variance(day.returns)
    return DailyMetrics(date = day.date, rv = rv, log_rv = math.log(rv), vr = vr)


def summarize_vr(metrics: List[DailyMetrics], q_list: Iterable[int], n: int) -> List[Dict[str, float]]:
    """
    Per-q mean and standard deviation of the daily VR against the asymptotic values
    """
    rows = []
    for q in q_list:
        values = np.array([m.vr[q] for m in metrics], dtype = float)
        rows.append({
            'q': q,
            'days': int(values.size),
            'mean': float(np.mean(values)) if values.size else float('nan'),
            'sd': float(np.std(values, ddof = 1)) if values.size > 1 else float('nan'),
            'asymptotic_sd': asymptotic_sd(n, q),
            'beta': beta_exponent(n, q),
        })
    return rows
