"""
Domain models shared by the library modules
"""

import datetime
import numpy as np
import pandas as pd

from typing import Any, Dict, Iterable, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from serialvol.types.options import RegressionSpec, RejectReason, SeMode, SimModel
from serialvol.lib.exceptions import (
    DegenerateDay,
    EmptyInput,
    InvalidSpec,
    NonPositivePrice,
    UnsortedTimestamps,
)


class ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed = True)


"""
Grid
"""

class TickSeries(ArrayModel):
    """
    Timestamped trade prices for one instrument across days.

    Timestamps are kept as datetime64[ns]; comparisons are exact.
    """
    timestamps: np.ndarray
    prices: np.ndarray

    @field_validator('timestamps', mode = 'before')
    def coerce_timestamps(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype = 'datetime64[ns]')

    @field_validator('prices', mode = 'before')
    def coerce_prices(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype = float)

    @model_validator(mode = 'after')
    def validate_records(self) -> 'TickSeries':
        if self.timestamps.shape != self.prices.shape or self.timestamps.ndim != 1:
            raise EmptyInput(f'timestamps and prices must be 1-d and equal length, got {self.timestamps.shape} and {self.prices.shape}')
        if self.timestamps.size and np.any(self.timestamps[1:] < self.timestamps[:-1]):
            idx = int(np.argmax(self.timestamps[1:] < self.timestamps[:-1])) + 1
            raise UnsortedTimestamps(f'timestamps must be non-decreasing (record {idx})')
        if np.any(~np.isfinite(self.prices)) or np.any(self.prices <= 0):
            idx = int(np.argmax(~(self.prices > 0) | ~np.isfinite(self.prices)))
            raise NonPositivePrice(f'every price must be positive and finite (record {idx}: {self.prices[idx]})')
        return self

    @classmethod
    def from_records(cls, records: Iterable[Tuple[Any, float]]) -> 'TickSeries':
        """
        Builds a TickSeries from (timestamp, price) pairs
        """
        records = list(records)
        if not records: return cls(timestamps = np.array([], dtype = 'datetime64[ns]'), prices = np.array([], dtype = float))
        ts, px = zip(*records)
        return cls(timestamps = [np.datetime64(t, 'ns') for t in ts], prices = px)

    @property
    def dates(self) -> np.ndarray:
        """
        The distinct calendar dates present, in order
        """
        return np.unique(self.timestamps.astype('datetime64[D]'))

    def for_date(self, date: datetime.date) -> Tuple[np.ndarray, np.ndarray]:
        """
        Returns the (timestamps, prices) recorded on `date`
        """
        day = np.datetime64(date, 'D')
        start = np.searchsorted(self.timestamps, day.astype('datetime64[ns]'), side = 'left')
        stop = np.searchsorted(self.timestamps, (day + 1).astype('datetime64[ns]'), side = 'left')
        return self.timestamps[start:stop], self.prices[start:stop]

    def __len__(self) -> int:
        return int(self.prices.size)


class GridSpec(BaseModel):
    """
    A regular intraday session grid. The session must split into exactly
    `expected_returns` steps.
    """
    session_open: datetime.time = datetime.time(9, 0)
    session_close: datetime.time = datetime.time(16, 0)
    step: datetime.timedelta = datetime.timedelta(minutes = 5)
    expected_returns: int = 84

    @model_validator(mode = 'after')
    def validate_grid(self) -> 'GridSpec':
        if self.step <= datetime.timedelta(0):
            raise InvalidSpec(f'grid step must be positive, got {self.step}')
        if self.expected_returns < 1:
            raise InvalidSpec(f'expected_returns must be positive, got {self.expected_returns}')
        span = self.span
        if span % self.step != datetime.timedelta(0) or span // self.step != self.expected_returns:
            raise InvalidSpec(
                f'session {self.session_open}-{self.session_close} does not split into '
                f'{self.expected_returns} steps of {self.step}'
            )
        return self

    @property
    def span(self) -> datetime.timedelta:
        base = datetime.date(2000, 1, 1)
        return datetime.datetime.combine(base, self.session_close) - datetime.datetime.combine(base, self.session_open)

    def instants(self, date: datetime.date) -> np.ndarray:
        """
        The expected_returns + 1 grid instants of the session on `date`
        """
        start = np.datetime64(datetime.datetime.combine(date, self.session_open), 'ns')
        return start + np.timedelta64(self.step, 'ns') * np.arange(self.expected_returns + 1)


class DayGrid(ArrayModel):
    """
    One trading day's regular price grid and its intraday log returns.

    `grid_prices` is None for days read from a gridded file.
    """
    date: datetime.date
    returns: np.ndarray
    grid_prices: Optional[np.ndarray] = None

    @field_validator('returns', 'grid_prices', mode = 'before')
    def coerce_arrays(cls, v: Any) -> Optional[np.ndarray]:
        return None if v is None else np.asarray(v, dtype = float)

    @property
    def n(self) -> int:
        return int(self.returns.size)


class DayDecision(BaseModel):
    """
    The outcome of validating a day. Truthy when accepted.
    """
    date: Optional[datetime.date] = None
    accepted: bool = True
    reason: Optional[RejectReason] = None
    detail: Optional[str] = None

    def __bool__(self) -> bool:
        return self.accepted

    @classmethod
    def accept(cls, date: Optional[datetime.date] = None) -> 'DayDecision':
        return cls(date = date, accepted = True)

    @classmethod
    def reject(cls, reason: RejectReason, date: Optional[datetime.date] = None, detail: Optional[str] = None) -> 'DayDecision':
        return cls(date = date, accepted = False, reason = reason, detail = detail)


"""
VR / RV
"""

class VrStat(BaseModel):
    q: int
    n: int
    vr: float
    beta: float
    sigma_a2: float
    sigma_c2: float
    m: float
    asymptotic_sd: float


class DailyMetrics(BaseModel):
    """
    Per-day log RV and VR(q) for each q of the pipeline
    """
    date: datetime.date
    rv: float
    log_rv: float
    vr: Dict[int, float] = Field(default_factory = dict)

    def row(self, q_list: Iterable[int]) -> Dict[str, Any]:
        row = {'date': self.date.isoformat(), 'log_rv': self.log_rv}
        row.update({f'vr_{q}': self.vr[q] for q in q_list})
        return row


class RvSeries(ArrayModel):
    """
    Date-ordered daily realized variance and its log.
    Lags over this series are trading-day lags.
    """
    dates: pd.DatetimeIndex
    rv: np.ndarray
    log_rv: np.ndarray

    @field_validator('dates', mode = 'before')
    def coerce_dates(cls, v: Any) -> pd.DatetimeIndex:
        try:
            return pd.DatetimeIndex(pd.to_datetime(v)).normalize()
        except (pd.errors.OutOfBoundsDatetime, pd.errors.OutOfBoundsTimedelta, OverflowError):
            # beyond the nanosecond range: fall back to second resolution
            days = np.array([np.datetime64(d.date() if isinstance(d, datetime.datetime) else d, 'D') for d in v])
            return pd.DatetimeIndex(days.astype('datetime64[s]'))

    @field_validator('rv', 'log_rv', mode = 'before')
    def coerce_arrays(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype = float)

    @model_validator(mode = 'after')
    def validate_series(self) -> 'RvSeries':
        if not (len(self.dates) == self.rv.size == self.log_rv.size):
            raise EmptyInput(f'dates, rv and log_rv lengths differ: {len(self.dates)}, {self.rv.size}, {self.log_rv.size}')
        if len(self.dates) > 1 and not self.dates.is_monotonic_increasing or not self.dates.is_unique:
            raise UnsortedTimestamps('RvSeries dates must be strictly increasing')
        if np.any(~(self.rv > 0)):
            idx = int(np.argmax(~(self.rv > 0)))
            raise DegenerateDay('realized variance must be positive', date = self.dates[idx].date())
        return self

    @classmethod
    def from_rv(cls, dates: Iterable[Any], rv: Iterable[float]) -> 'RvSeries':
        rv = np.asarray(list(rv) if not isinstance(rv, np.ndarray) else rv, dtype = float)
        with np.errstate(divide = 'ignore', invalid = 'ignore'):
            log_rv = np.log(rv)
        return cls(dates = list(dates), rv = rv, log_rv = log_rv)

    @classmethod
    def from_log_rv(cls, dates: Iterable[Any], log_rv: Iterable[float]) -> 'RvSeries':
        log_rv = np.asarray(list(log_rv) if not isinstance(log_rv, np.ndarray) else log_rv, dtype = float)
        return cls(dates = list(dates), rv = np.exp(log_rv), log_rv = log_rv)

    @classmethod
    def from_days(cls, days: Iterable['DayGrid']) -> 'RvSeries':
        from serialvol.lib.realized import realized_variance
        days = list(days)
        return cls.from_rv([d.date for d in days], [realized_variance(d.returns) for d in days])

    @classmethod
    def from_metrics(cls, metrics: Iterable['DailyMetrics']) -> 'RvSeries':
        metrics = list(metrics)
        return cls.from_log_rv([m.date for m in metrics], [m.log_rv for m in metrics])

    def to_series(self) -> pd.Series:
        return pd.Series(self.log_rv, index = self.dates, name = 'log_rv')

    def slice(self, start: int = 0, stop: Optional[int] = None) -> 'RvSeries':
        return RvSeries(dates = self.dates[start:stop], rv = self.rv[start:stop], log_rv = self.log_rv[start:stop])

    def __len__(self) -> int:
        return len(self.dates)


"""
HAR
"""

HAR_COEF_NAMES = ('beta0', 'beta_d', 'beta_w', 'beta_m')


class HarDesign(ArrayModel):
    response: np.ndarray
    design: np.ndarray
    dates: pd.DatetimeIndex
    columns: Tuple[str, ...] = ('const', 'log_rv_d', 'log_rv_w', 'log_rv_m')

    @property
    def n_obs(self) -> int:
        return int(self.response.size)


class HarFit(ArrayModel):
    """
    HAR coefficients with the predictable (fitted) and unexpected (residual)
    volatility series, aligned to dates.
    """
    coefficients: Dict[str, float]
    standard_errors: Dict[str, float]
    fitted: pd.Series
    residuals: pd.Series
    log_rv: pd.Series
    n_obs: int
    adj_r2: float

    @property
    def beta0(self) -> float: return self.coefficients['beta0']

    @property
    def beta_d(self) -> float: return self.coefficients['beta_d']

    @property
    def beta_w(self) -> float: return self.coefficients['beta_w']

    @property
    def beta_m(self) -> float: return self.coefficients['beta_m']

    @property
    def sigma_p(self) -> pd.Series:
        return self.fitted

    @property
    def sigma_u(self) -> pd.Series:
        return self.residuals

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.fitted.index

    @property
    def persistence(self) -> float:
        return self.beta_d + self.beta_w + self.beta_m

    def frame(self) -> pd.DataFrame:
        """
        date, log_rv, sigma_p, sigma_u
        """
        return pd.DataFrame({
            'log_rv': self.log_rv,
            'sigma_p': self.fitted,
            'sigma_u': self.residuals,
        }, index = self.dates)


"""
Regressions
"""

class OlsResult(ArrayModel):
    coefficients: np.ndarray
    standard_errors: np.ndarray
    adj_r2: float
    r2: float
    residuals: np.ndarray
    fitted: np.ndarray
    sigma2: float
    n_obs: int
    se_mode: SeMode = SeMode.ols


class RegressionResult(BaseModel):
    spec_name: RegressionSpec
    q: Optional[int] = None
    coefficients: Dict[str, float]
    standard_errors: Dict[str, float]
    adj_r2: float
    n_obs: int
    se_mode: SeMode = SeMode.ols

    @model_validator(mode = 'after')
    def validate_result(self) -> 'RegressionResult':
        if list(self.coefficients) != list(self.standard_errors):
            raise ValueError('coefficient and standard error names differ')
        if any(not np.isfinite(v) or v < 0 for v in self.standard_errors.values()):
            raise ValueError(f'standard errors must be finite and non-negative: {self.standard_errors}')
        if self.adj_r2 > 1 + 1e-12:
            raise ValueError(f'adjusted R2 above 1: {self.adj_r2}')
        return self

    @property
    def adj_r2_pct(self) -> float:
        return 100.0 * self.adj_r2

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.coefficients)

    def rows(self) -> List[Dict[str, Any]]:
        """
        Long-format rows: q, spec, coef_name, estimate, std_error, adj_r2_pct, n_obs
        """
        return [
            {
                'q': self.q,
                'spec': self.spec_name.value,
                'coef_name': name,
                'estimate': self.coefficients[name],
                'std_error': self.standard_errors[name],
                'adj_r2_pct': self.adj_r2_pct,
                'n_obs': self.n_obs,
            }
            for name in self.coefficients
        ]


class RollingWindow(BaseModel):
    window_end_date: datetime.date
    result: RegressionResult
    ci_low: Dict[str, float]
    ci_high: Dict[str, float]


class RollingSeries(BaseModel):
    spec_name: RegressionSpec
    q: Optional[int] = None
    window_length: int
    level: float
    windows: List[RollingWindow] = Field(default_factory = list)

    def __len__(self) -> int:
        return len(self.windows)

    def coefficient_path(self, name: str) -> pd.Series:
        return pd.Series(
            [w.result.coefficients[name] for w in self.windows],
            index = pd.DatetimeIndex([w.window_end_date for w in self.windows]),
            name = name,
        )

    def frame(self) -> pd.DataFrame:
        """
        window_end_date, coef_name, estimate, ci_low, ci_high
        """
        rows = [
            {
                'window_end_date': w.window_end_date.isoformat(),
                'coef_name': name,
                'estimate': w.result.coefficients[name],
                'ci_low': w.ci_low[name],
                'ci_high': w.ci_high[name],
            }
            for w in self.windows
            for name in w.result.coefficients
        ]
        return pd.DataFrame(rows, columns = ['window_end_date', 'coef_name', 'estimate', 'ci_low', 'ci_high'])


"""
Simulation
"""

class SimSpec(BaseModel):
    """
    Synthetic market specification. Invariants are checked on construction
    and raise InvalidSpec.
    """
    model: SimModel = SimModel.iid_gaussian
    days: int = 1000
    returns_per_day: int = 84
    seed: int = 0
    sigma: float = 1.0
    phi: float = 0.0
    beta0: float = 0.1
    beta_d: float = 0.4
    beta_w: float = 0.3
    beta_m: float = 0.2
    noise_sd: float = 0.3
    burn_in: int = 500
    start_date: datetime.date = datetime.date(2000, 1, 3)

    @model_validator(mode = 'after')
    def validate_spec(self) -> 'SimSpec':
        if self.days < 1:
            raise InvalidSpec(f'days must be at least 1, got {self.days}')
        if self.returns_per_day < 2:
            raise InvalidSpec(f'returns_per_day must be at least 2, got {self.returns_per_day}')
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidSpec(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        if not self.sigma >= 0:
            raise InvalidSpec(f'sigma must be non-negative, got {self.sigma}')
        if self.model == SimModel.ar1 and not abs(self.phi) < 1:
            raise InvalidSpec(f'ar1 requires |phi| < 1, got {self.phi}')
        if self.model == SimModel.har_cascade:
            if not self.beta_d + self.beta_w + self.beta_m < 1:
                raise InvalidSpec(f'har_cascade requires beta_d + beta_w + beta_m < 1, got {self.beta_d + self.beta_w + self.beta_m}')
            if not self.noise_sd > 0:
                raise InvalidSpec(f'har_cascade requires noise_sd > 0, got {self.noise_sd}')
            if self.burn_in < 0:
                raise InvalidSpec(f'burn_in must be non-negative, got {self.burn_in}')
        return self

    @property
    def fixed_point(self) -> float:
        return self.beta0 / (1.0 - self.beta_d - self.beta_w - self.beta_m)


class SimPanel(ArrayModel):
    """
    Simulated intraday return panel, one row per synthetic trading day.
    `log_variance` holds the generated daily log-variance path (har_cascade only).
    """
    dates: pd.DatetimeIndex
    returns: np.ndarray
    log_variance: Optional[pd.Series] = None

    def days(self) -> List[DayGrid]:
        return [DayGrid(date = d.date(), returns = r) for d, r in zip(self.dates, self.returns)]

    def __len__(self) -> int:
        return len(self.dates)
