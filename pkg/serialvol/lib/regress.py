"""
OLS engine and the three VR regressions, full sample and on rolling windows
"""

import datetime
import numpy as np
import pandas as pd

from scipy import linalg
from scipy.stats import norm
from typing import Dict, Iterable, List, Optional, Union

from serialvol.types.options import HarRefitMode, RegressionSpec, SeMode
from serialvol.types.models import (
    ArrayModel,
    DailyMetrics,
    HarFit,
    OlsResult,
    RegressionResult,
    RollingSeries,
    RollingWindow,
    RvSeries,
)
from serialvol.lib.exceptions import (
    AlignmentError,
    InvalidSpec,
    SerialVolError,
    RankDeficient,
    SeriesTooShort,
    TooFewRows,
)
from serialvol.utils.logs import default_logger as logger
from serialvol.utils.pooler import ThreadPooler
from serialvol.utils.helpers import timed

RANK_TOL = 1e-10
MIN_ROWS = 10


def ols(
    y: np.ndarray,
    X: np.ndarray,
    se_mode: Union[SeMode, str] = SeMode.ols,
) -> OlsResult:
    """
    Least squares through an economic QR decomposition of X.

    X must carry the intercept as its first column. Standard errors are
    homoskedastic (s^2 (X'X)^-1) or White HC0.
    """
    se_mode = SeMode(se_mode)
    y = np.asarray(y, dtype = float)
    X = np.asarray(X, dtype = float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise TooFewRows(f'y has shape {y.shape}, X has shape {X.shape}')
    n, k = X.shape
    if n <= k:
        raise TooFewRows(f'need more rows than columns, got {n} x {k}')

    Q, R = linalg.qr(X, mode = 'economic')
    diag = np.abs(np.diag(R))
    if not diag.max() > 0 or diag.min() < RANK_TOL * diag.max():
        raise RankDeficient(f'design matrix is rank deficient (|R_ii| min {diag.min():.3g}, max {diag.max():.3g})')

    coefficients = linalg.solve_triangular(R, Q.T @ y)
    fitted = X @ coefficients
    residuals = y - fitted
    sse = float(residuals @ residuals)
    sigma2 = sse / (n - k)

    r_inv = linalg.solve_triangular(R, np.eye(k))
    if se_mode == SeMode.white:
        scaled = Q * residuals[:, None]
        cov = r_inv @ (scaled.T @ scaled) @ r_inv.T
    else:
        cov = sigma2 * (r_inv @ r_inv.T)
    standard_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    dev = y - np.mean(y)
    sst = float(dev @ dev)
    r2 = 1.0 - sse / sst if sst > 0 else 0.0
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - k)
    return OlsResult(
        coefficients = coefficients,
        standard_errors = standard_errors,
        adj_r2 = adj_r2,
        r2 = r2,
        residuals = residuals,
        fitted = fitted,
        sigma2 = sigma2,
        n_obs = n,
        se_mode = se_mode,
    )


def _aligned(vr: pd.Series, other: pd.Series, label: str) -> pd.Series:
    if len(vr.index) != len(other.index) or not vr.index.sort_values().equals(other.index.sort_values()):
        raise AlignmentError(f'vr and {label} cover different dates ({len(vr)} vs {len(other)})')
    return other.reindex(vr.index)


def _check_rows(n: int, spec: RegressionSpec):
    if n < MIN_ROWS:
        raise TooFewRows(f'{spec.value} regression needs at least {MIN_ROWS} rows, got {n}')


def _result(spec: RegressionSpec, res: OlsResult, q: Optional[int]) -> RegressionResult:
    names = spec.coef_names
    return RegressionResult(
        spec_name = spec,
        q = q,
        coefficients = dict(zip(names, map(float, res.coefficients))),
        standard_errors = dict(zip(names, map(float, res.standard_errors))),
        adj_r2 = res.adj_r2,
        n_obs = res.n_obs,
        se_mode = res.se_mode,
    )


def regression_simple(
    vr: pd.Series,
    log_rv: pd.Series,
    q: Optional[int] = None,
    se_mode: SeMode = SeMode.ols,
) -> RegressionResult:
    """
    VR(q)_t = b + c log RV_t + e_t
    """
    vr = vr.sort_index()
    log_rv = _aligned(vr, log_rv, 'log_rv')
    _check_rows(len(vr), RegressionSpec.simple)
    X = np.column_stack([np.ones(len(vr)), log_rv.to_numpy(float)])
    return _result(RegressionSpec.simple, ols(vr.to_numpy(float), X, se_mode), q)


def regression_lagged(
    vr: pd.Series,
    log_rv: pd.Series,
    q: Optional[int] = None,
    se_mode: SeMode = SeMode.ols,
) -> RegressionResult:
    """
    VR(q)_t = b + c0 log RV_t + c1 log RV_{t-1} + e_t

    The lag is the previous trading day in the series; the first day is dropped.
    """
    vr = vr.sort_index()
    log_rv = _aligned(vr, log_rv, 'log_rv').to_numpy(float)
    _check_rows(len(vr) - 1, RegressionSpec.lagged)
    X = np.column_stack([np.ones(len(vr) - 1), log_rv[1:], log_rv[:-1]])
    return _result(RegressionSpec.lagged, ols(vr.to_numpy(float)[1:], X, se_mode), q)


def regression_decomposed(
    vr: pd.Series,
    har_fit: HarFit,
    q: Optional[int] = None,
    se_mode: SeMode = SeMode.ols,
) -> RegressionResult:
    """
    VR(q)_t = b + coef_expected sigma_p,t + coef_unexpected sigma_u,t + e_t
    """
    vr = vr.sort_index()
    missing = vr.index.difference(har_fit.dates)
    if len(missing):
        raise AlignmentError(f'{len(missing)} vr dates have no HAR decomposition (first {missing[0].date()})')
    _check_rows(len(vr), RegressionSpec.decomposed)
    X = np.column_stack([
        np.ones(len(vr)),
        har_fit.sigma_p.reindex(vr.index).to_numpy(float),
        har_fit.sigma_u.reindex(vr.index).to_numpy(float),
    ])
    return _result(RegressionSpec.decomposed, ols(vr.to_numpy(float), X, se_mode), q)


class RegressionInputs(ArrayModel):
    """
    Everything the regressions read: the daily log RV series, the VR table
    (one column per q, same dates) and the full-sample HAR fit.

    The common regression sample is the set of HAR dates; the lagged
    regression also reads the day before the first of them.
    """
    series: RvSeries
    vr: pd.DataFrame
    har_fit: HarFit

    @classmethod
    def from_metrics(cls, metrics: Iterable[DailyMetrics], q_list: Iterable[int], se_mode: SeMode = SeMode.ols) -> 'RegressionInputs':
        from serialvol.lib.har import fit_har
        metrics = list(metrics)
        series = RvSeries.from_metrics(metrics)
        vr = pd.DataFrame(
            {q: [m.vr[q] for m in metrics] for q in q_list},
            index = series.dates,
        )
        return cls(series = series, vr = vr, har_fit = fit_har(series, se_mode = se_mode))

    @property
    def offset(self) -> int:
        """
        Position of the first regression date in the series
        """
        return len(self.series) - self.har_fit.n_obs

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.series.dates[self.offset:]

    def regress(
        self,
        spec: RegressionSpec,
        q: int,
        start: int = 0,
        stop: Optional[int] = None,
        har_fit: Optional[HarFit] = None,
        se_mode: SeMode = SeMode.ols,
    ) -> RegressionResult:
        """
        Runs `spec` for `q` over regression-sample positions [start, stop)
        """
        if q not in self.vr.columns:
            raise AlignmentError(f'no vr column for q={q}', q = q)
        lo = self.offset + start
        hi = self.offset + (stop if stop is not None else len(self.dates))
        log_rv = self.series.to_series()
        vr = self.vr[q]
        if spec == RegressionSpec.simple:
            return regression_simple(vr.iloc[lo:hi], log_rv.iloc[lo:hi], q = q, se_mode = se_mode)
        if spec == RegressionSpec.lagged:
            return regression_lagged(vr.iloc[lo - 1:hi], log_rv.iloc[lo - 1:hi], q = q, se_mode = se_mode)
        return regression_decomposed(vr.iloc[lo:hi], har_fit or self.har_fit, q = q, se_mode = se_mode)


def full_sample_regressions(
    inputs: RegressionInputs,
    q_list: Iterable[int],
    specs: Iterable[RegressionSpec] = tuple(RegressionSpec),
    se_mode: SeMode = SeMode.ols,
) -> List[RegressionResult]:
    """
    Every spec for every q over the common sample, ordered by q then spec
    """
    specs = list(specs)
    results = []
    for q in q_list:
        for spec in specs:
            try:
                results.append(inputs.regress(spec, q, se_mode = se_mode))
            except SerialVolError as e:
                raise e.with_context(q = q)
    return results


# `position` indexes the regression sample, which starts after the 22 days of HAR
# history, so a series of `days` trading days yields (days - 22) - window_length + 1
# windows: 229 for 1500 days at 1250, 3073 for 4344 days.
def _window(
    position: int,
    inputs: RegressionInputs,
    spec: RegressionSpec,
    q: int,
    window_length: int,
    z: float,
    har_mode: HarRefitMode,
    se_mode: SeMode,
) -> RollingWindow:
    har_fit = None
    if spec == RegressionSpec.decomposed and har_mode == HarRefitMode.per_window:
        from serialvol.lib.har import fit_har
        har_fit = fit_har(inputs.series, start = position, stop = inputs.offset + position + window_length)
    result = inputs.regress(spec, q, start = position, stop = position + window_length, har_fit = har_fit, se_mode = se_mode)
    return RollingWindow(
        window_end_date = inputs.dates[position + window_length - 1].date(),
        result = result,
        ci_low = {k: result.coefficients[k] - z * result.standard_errors[k] for k in result.names},
        ci_high = {k: result.coefficients[k] + z * result.standard_errors[k] for k in result.names},
    )


@timed
def rolling_regression(
    spec: Union[RegressionSpec, str],
    inputs: RegressionInputs,
    q: int,
    window_length: int = 1250,
    level: float = 0.95,
    har_mode: HarRefitMode = HarRefitMode.full_sample,
    se_mode: SeMode = SeMode.ols,
    workers: Optional[int] = None,
) -> RollingSeries:
    """
    Refits `spec` on every window of `window_length` consecutive regression
    days, stepping one trading day, with normal-quantile confidence bands.

    With `har_mode = per_window` the HAR decomposition is re-estimated on
    each window's own history before the decomposed regression.
    """
    spec = RegressionSpec(spec)
    if window_length <= len(spec.coef_names) + 2:
        raise InvalidSpec(f'window_length must exceed {len(spec.coef_names) + 2}, got {window_length}')
    if not 0 < level < 1:
        raise InvalidSpec(f'confidence level must lie in (0, 1), got {level}')
    size = len(inputs.dates)
    if size < window_length:
        raise SeriesTooShort(f'{size} regression days is shorter than the window of {window_length}', q = q)
    z = float(norm.ppf(0.5 + level / 2.0))
    positions = range(size - window_length + 1)
    with logger.contextualize(q = q):
        logger.status('window', f'{spec.value}: {len(positions)} windows of {window_length} days')
    windows = ThreadPooler.map(
        _window, positions, inputs, spec, q, window_length, z, HarRefitMode(har_mode), SeMode(se_mode),
        workers = workers,
    )
    return RollingSeries(spec_name = spec, q = q, window_length = window_length, level = level, windows = windows)


def format_table(results: Iterable[RegressionResult], digits: int = 3) -> str:
    """
    Text rendering of the full-sample results: one line per (q, spec) with
    standard errors in brackets and adjusted R^2 in percent.
    """
    lines = [f'{"q":>3}  {"spec":<11} coefficients', '-' * 72]
    for res in results:
        cells = '  '.join(
            f'{name} {res.coefficients[name]:.{digits}f} [{res.standard_errors[name]:.{digits}f}]'
            for name in res.names
        )
        lines.append(f'{res.q if res.q is not None else "-":>3}  {res.spec_name.value:<11} {cells}  adj.R2 {res.adj_r2_pct:.2f}%  n={res.n_obs}')
    return '\n'.join(lines) + '\n'
