"""
Daily realized variance and the heterogeneous (weekly / monthly) log RV averages
"""

import datetime
import numpy as np
import pandas as pd

from numpy.lib.stride_tricks import sliding_window_view
from typing import Iterable, Union
from serialvol.types.options import Horizon
from serialvol.types.models import RvSeries
from serialvol.lib.exceptions import EmptyInput, InsufficientHistory, NonFiniteReturn


def realized_variance(returns: Union[Iterable[float], np.ndarray]) -> float:
    """
    Sum of squared intraday returns
    """
    r = np.asarray(returns, dtype = float)
    if r.size == 0:
        raise EmptyInput('cannot compute realized variance of an empty day')
    if not np.all(np.isfinite(r)):
        raise NonFiniteReturn('returns contain non-finite values')
    return float(np.sum(r * r))


def _position(series: RvSeries, t: Union[int, datetime.date, pd.Timestamp]) -> int:
    if isinstance(t, (int, np.integer)): return int(t)
    try:
        return int(series.dates.get_loc(pd.Timestamp(t).normalize()))
    except KeyError as e:
        raise InsufficientHistory(f'date {t} is not in the series') from e


def heterogeneous_average(
    series: RvSeries,
    t: Union[int, datetime.date, pd.Timestamp],
    horizon: Union[Horizon, int] = Horizon.weekly,
) -> float:
    """
    Mean of log RV over the `horizon` trading days strictly before t.

    `t` is a position in the series or one of its dates.
    """
    pos = _position(series, t)
    horizon = int(horizon)
    if pos < horizon or pos > len(series):
        raise InsufficientHistory(f'need {horizon} days before position {pos}', horizon = horizon)
    return float(np.mean(series.log_rv[pos - horizon:pos]))


def heterogeneous_averages(series: RvSeries, horizon: Union[Horizon, int]) -> np.ndarray:
    """
    heterogeneous_average for every position at once; NaN where history is short
    """
    horizon = int(horizon)
    out = np.full(len(series), np.nan)
    if len(series) <= horizon: return out
    means = sliding_window_view(series.log_rv, horizon).mean(axis = 1)
    out[horizon:] = means[:len(series) - horizon]
    return out
