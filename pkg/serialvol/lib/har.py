"""
HAR model on daily log RV and the predictable / unexpected volatility split
"""

import numpy as np
import pandas as pd

from typing import Optional
from serialvol.types.options import Horizon, SeMode
from serialvol.types.models import RvSeries, HarDesign, HarFit, HAR_COEF_NAMES
from serialvol.lib.exceptions import InsufficientHistory, TooFewRows
from serialvol.lib.realized import heterogeneous_averages
from serialvol.lib.regress import ols
from serialvol.utils.logs import default_logger as logger

HISTORY = int(Horizon.monthly)
MIN_OBS = 5


def build_har_design(series: RvSeries) -> HarDesign:
    """
    One row per day t with a full 22-day history:
    response log RV_t, regressors [1, log RV_{t-1}, weekly mean, monthly mean].
    """
    size = len(series)
    if size < HISTORY + 1:
        raise InsufficientHistory(f'HAR needs at least {HISTORY + 1} days, got {size}')
    log_rv = series.log_rv
    design = np.column_stack([
        np.ones(size - HISTORY),
        log_rv[HISTORY - 1:size - 1],
        heterogeneous_averages(series, Horizon.weekly)[HISTORY:],
        heterogeneous_averages(series, Horizon.monthly)[HISTORY:],
    ])
    return HarDesign(
        response = log_rv[HISTORY:].copy(),
        design = design,
        dates = series.dates[HISTORY:],
    )


def fit_har(
    series: RvSeries,
    start: Optional[int] = None,
    stop: Optional[int] = None,
    se_mode: SeMode = SeMode.ols,
) -> HarFit:
    """
    OLS fit of the HAR model over series[start:stop].

    Fitted values are the predictable volatility sigma_p, residuals the
    unexpected volatility sigma_u.
    """
    if start is not None or stop is not None:
        series = series.slice(start or 0, stop)
    har = build_har_design(series)
    if har.n_obs < MIN_OBS:
        raise TooFewRows(f'HAR needs at least {MIN_OBS} observations after the {HISTORY}-day history, got {har.n_obs}')
    res = ols(har.response, har.design, se_mode = se_mode)
    fit = HarFit(
        coefficients = dict(zip(HAR_COEF_NAMES, map(float, res.coefficients))),
        standard_errors = dict(zip(HAR_COEF_NAMES, map(float, res.standard_errors))),
        fitted = pd.Series(res.fitted, index = har.dates, name = 'sigma_p'),
        residuals = pd.Series(res.residuals, index = har.dates, name = 'sigma_u'),
        log_rv = pd.Series(har.response, index = har.dates, name = 'log_rv'),
        n_obs = har.n_obs,
        adj_r2 = res.adj_r2,
    )
    logger.debug(f'HAR fitted on {fit.n_obs} days, persistence {fit.persistence:.4f}')
    return fit
