"""
Previous-tick resampling of trade prices onto a regular intraday grid
"""

import datetime
import numpy as np

from typing import Iterable, List, Optional, Tuple, Union
from serialvol.types.options import RejectReason
from serialvol.types.models import TickSeries, GridSpec, DayGrid, DayDecision
from serialvol.lib.exceptions import (
    DataError,
    EmptyDay,
    NoPriceBeforeOpen,
    NonPositivePrice,
    TooShort,
)
from serialvol.utils.logs import default_logger as logger
from serialvol.utils.pooler import ThreadPooler


_REJECT_REASONS = {
    EmptyDay: RejectReason.empty_day,
    NoPriceBeforeOpen: RejectReason.no_price_before_open,
}


def grid_instants(spec: GridSpec, date: datetime.date) -> np.ndarray:
    """
    The expected_returns + 1 grid instants of the session on `date`
    """
    return spec.instants(date)


def log_returns(prices: Union[Iterable[float], np.ndarray]) -> np.ndarray:
    """
    output[i] = ln(prices[i + 1] / prices[i])
    """
    prices = np.asarray(prices, dtype = float)
    if prices.ndim != 1 or prices.size < 2:
        raise TooShort(f'log returns need at least 2 prices, got {prices.size}')
    if np.any(~np.isfinite(prices)) or np.any(prices <= 0):
        idx = int(np.argmax(~np.isfinite(prices) | (prices <= 0)))
        raise NonPositivePrice(f'price {idx} is not positive: {prices[idx]}')
    return np.diff(np.log(prices))


def previous_tick_resample(ticks: TickSeries, spec: GridSpec, date: datetime.date) -> DayGrid:
    """
    Assigns each grid instant the price of the last tick at or before it.

    Only ticks recorded on `date` are used, so nothing carries over from the
    previous session.
    """
    timestamps, prices = ticks.for_date(date)
    if timestamps.size == 0:
        raise EmptyDay('no ticks recorded on this date', date = date)
    instants = grid_instants(spec, date)
    idx = np.searchsorted(timestamps, instants, side = 'right') - 1
    if idx[0] < 0:
        raise NoPriceBeforeOpen(
            f'first tick at {timestamps[0]} is after the session open {instants[0]}',
            date = date,
        )
    grid_prices = prices[idx]
    return DayGrid(date = date, grid_prices = grid_prices, returns = log_returns(grid_prices))


def validate_day(day: DayGrid, spec: GridSpec) -> DayDecision:
    """
    Accepts a day when it holds exactly expected_returns finite returns
    """
    if day.n != spec.expected_returns:
        return DayDecision.reject(
            RejectReason.wrong_length,
            date = day.date,
            detail = f'expected {spec.expected_returns} returns, got {day.n}',
        )
    if not np.all(np.isfinite(day.returns)):
        bad = int(np.argmax(~np.isfinite(day.returns)))
        return DayDecision.reject(
            RejectReason.non_finite,
            date = day.date,
            detail = f'return {bad + 1} is {day.returns[bad]}',
        )
    return DayDecision.accept(day.date)


def _resample_one(date: datetime.date, ticks: TickSeries, spec: GridSpec) -> Tuple[Optional[DayGrid], DayDecision]:
    try:
        day = previous_tick_resample(ticks, spec, date)
    except (EmptyDay, NoPriceBeforeOpen) as e:
        return None, DayDecision.reject(_REJECT_REASONS[type(e)], date = date, detail = e.message)
    return day, validate_day(day, spec)


def resample_ticks(
    ticks: TickSeries,
    spec: GridSpec,
    dates: Optional[Iterable[datetime.date]] = None,
    workers: Optional[int] = None,
) -> Tuple[List[DayGrid], List[DayDecision]]:
    """
    Resamples every calendar date present in `ticks` (or the given `dates`).

    Returns the accepted day grids and the rejections, both in date order.
    Rejected days are logged and never padded.
    """
    if dates is None:
        dates = ticks.dates.tolist()
    outcomes = ThreadPooler.map(_resample_one, list(dates), ticks, spec, workers = workers)
    days, rejections = [], []
    for day, decision in outcomes:
        if decision:
            days.append(day)
            continue
        with logger.contextualize(date = decision.date):
            logger.status('rejected', f'{decision.reason.value}: {decision.detail}', level = 'warning')
        rejections.append(decision)
    return days, rejections


def accepted_days(days: Iterable[DayGrid], spec: GridSpec) -> Tuple[List[DayGrid], List[DayDecision]]:
    """
    Splits already-gridded days into accepted days and rejections
    """
    kept, rejections = [], []
    for day in days:
        decision = validate_day(day, spec)
        if decision:
            kept.append(day)
            continue
        with logger.contextualize(date = decision.date):
            logger.status('rejected', f'{decision.reason.value}: {decision.detail}', level = 'warning')
        rejections.append(decision)
    return kept, rejections
