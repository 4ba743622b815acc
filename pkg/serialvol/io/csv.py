"""
Codecs for the tick, gridded, metrics, HAR, regression, rolling and rejection files
"""

import re
import datetime
import numpy as np
import pandas as pd

from typing import Any, Dict, Iterable, List, Optional
from serialvol.io.base import BasePack
from serialvol.types.options import RegressionSpec
from serialvol.types.models import (
    DayDecision,
    DayGrid,
    DailyMetrics,
    HarFit,
    RegressionResult,
    RollingSeries,
    TickSeries,
)
from serialvol.lib.exceptions import DataError, EmptyInput, ParseError

_EPOCH = re.compile(r'^-?\d+$')


def _parse_date(value: str, path: Optional[str], line: int) -> datetime.date:
    try:
        return datetime.date.fromisoformat(value)
    except ValueError:
        raise ParseError(f'cannot parse date {value!r} (expected YYYY-MM-DD)', path = path, line = line) from None


def _expect_header(found: List[str], expected: List[str], path: Optional[str], line: int):
    if [f.lower() for f in found] != expected:
        raise ParseError(f'expected header {",".join(expected)}, got {",".join(found)}', path = path, line = line)


class TickCsv(BasePack):
    """
    `timestamp,price` with ISO-8601 timestamps or integer epoch milliseconds,
    detected once per file from the first record.
    """
    header = ('timestamp', 'price')

    @classmethod
    def dumps(cls, ticks: TickSeries) -> str:
        rows = [
            (np.datetime_as_string(ts, unit = 's'), float(px))
            for ts, px in zip(ticks.timestamps, ticks.prices)
        ]
        return cls.write_rows(cls.header, rows)

    @classmethod
    def loads(cls, text: str, path: Optional[str] = None) -> TickSeries:
        rows = cls.iter_rows(text, path)
        lineno, found = cls.read_header(rows, path)
        _expect_header(found, list(cls.header), path, lineno)

        epoch: Optional[bool] = None
        timestamps, prices, lines = [], [], []
        for lineno, fields in rows:
            if len(fields) != 2:
                raise ParseError(f'expected 2 fields, got {len(fields)}', path = path, line = lineno)
            raw_ts, raw_px = fields
            if epoch is None: epoch = bool(_EPOCH.match(raw_ts))
            try:
                if epoch:
                    ts = np.datetime64(int(raw_ts), 'ms').astype('datetime64[ns]')
                else:
                    if len(raw_ts) <= 10 or _EPOCH.match(raw_ts):
                        raise ValueError('timestamp needs a date and a time')
                    ts = np.datetime64(raw_ts, 'ns')
            except ValueError as e:
                kind = 'epoch milliseconds' if epoch else 'ISO-8601 date and time'
                raise ParseError(f'cannot parse timestamp {raw_ts!r} as {kind}: {e}', path = path, line = lineno) from None
            timestamps.append(ts)
            prices.append(cls.parse_float(raw_px, path, lineno, 'price'))
            lines.append(lineno)
        if not timestamps:
            raise EmptyInput('tick file holds no records', path = path)
        try:
            return TickSeries(timestamps = np.array(timestamps, dtype = 'datetime64[ns]'), prices = prices)
        except DataError as e:
            raise e.with_context(path = path)


class GriddedCsv(BasePack):
    """
    `date,r1,...,rN`, one row per day of intraday log returns
    """

    @classmethod
    def dumps(cls, days: Iterable[DayGrid], returns_per_day: Optional[int] = None) -> str:
        days = list(days)
        width = returns_per_day or max((d.n for d in days), default = 0)
        header = ['date'] + [f'r{i}' for i in range(1, width + 1)]
        return cls.write_rows(header, [[d.date.isoformat(), *map(float, d.returns)] for d in days])

    @classmethod
    def loads(cls, text: str, path: Optional[str] = None) -> List[DayGrid]:
        """
        Rows with a wrong number of returns are kept as they are; validate_day rejects them.
        """
        rows = cls.iter_rows(text, path)
        lineno, found = cls.read_header(rows, path)
        if not found or found[0].lower() != 'date' or len(found) < 2:
            raise ParseError(f'expected header date,r1,...,rN, got {",".join(found)}', path = path, line = lineno)
        days = []
        for lineno, fields in rows:
            date = _parse_date(fields[0], path, lineno)
            returns = [cls.parse_float(v, path, lineno, f'r{i}') for i, v in enumerate(fields[1:], 1)]
            days.append(DayGrid(date = date, returns = returns))
        if not days:
            raise EmptyInput('gridded file holds no days', path = path)
        return days


class MetricsCsv(BasePack):
    """
    `date,log_rv,vr_2,...`, one row per accepted day
    """

    @classmethod
    def dumps(cls, metrics: Iterable[DailyMetrics], q_list: Iterable[int]) -> str:
        q_list = list(q_list)
        header = ['date', 'log_rv'] + [f'vr_{q}' for q in q_list]
        return cls.write_rows(header, [list(m.row(q_list).values()) for m in metrics])

    @classmethod
    def loads(cls, text: str, path: Optional[str] = None) -> List[DailyMetrics]:
        rows = cls.iter_rows(text, path)
        lineno, found = cls.read_header(rows, path)
        found = [f.lower() for f in found]
        if found[:2] != ['date', 'log_rv'] or not all(re.match(r'^vr_\d+$', f) for f in found[2:]):
            raise ParseError(f'expected header date,log_rv,vr_q,..., got {",".join(found)}', path = path, line = lineno)
        q_list = [int(f[3:]) for f in found[2:]]
        metrics = []
        for lineno, fields in rows:
            if len(fields) != len(found):
                raise ParseError(f'expected {len(found)} fields, got {len(fields)}', path = path, line = lineno)
            log_rv = cls.parse_float(fields[1], path, lineno, 'log_rv')
            metrics.append(DailyMetrics(
                date = _parse_date(fields[0], path, lineno),
                rv = float(np.exp(log_rv)),
                log_rv = log_rv,
                vr = {q: cls.parse_float(v, path, lineno, f'vr_{q}') for q, v in zip(q_list, fields[2:])},
            ))
        if not metrics:
            raise EmptyInput('metrics file holds no days', path = path)
        return metrics


class HarCsv(BasePack):
    header = ('date', 'log_rv', 'sigma_p', 'sigma_u')

    @classmethod
    def dumps(cls, fit: HarFit) -> str:
        frame = fit.frame()
        rows = [
            (d.date().isoformat(), float(r.log_rv), float(r.sigma_p), float(r.sigma_u))
            for d, r in zip(frame.index, frame.itertuples(index = False))
        ]
        return cls.write_rows(cls.header, rows)


class HarCoefficientsCsv(BasePack):
    header = ('coef_name', 'estimate', 'std_error', 'adj_r2_pct', 'n_obs')

    @classmethod
    def dumps(cls, fit: HarFit) -> str:
        rows = [
            (name, fit.coefficients[name], fit.standard_errors[name], 100.0 * fit.adj_r2, fit.n_obs)
            for name in fit.coefficients
        ]
        return cls.write_rows(cls.header, rows)


class RegressionCsv(BasePack):
    """
    Full-sample table in long form: one row per (q, spec, coefficient)
    """
    header = ('q', 'spec', 'coef_name', 'estimate', 'std_error', 'adj_r2_pct', 'n_obs')

    @classmethod
    def dumps(cls, results: Iterable[RegressionResult]) -> str:
        rows = [[row[k] for k in cls.header] for res in results for row in res.rows()]
        return cls.write_rows(cls.header, rows)

    @classmethod
    def loads(cls, text: str, path: Optional[str] = None) -> List[RegressionResult]:
        rows = cls.iter_rows(text, path)
        lineno, found = cls.read_header(rows, path)
        _expect_header(found, list(cls.header), path, lineno)
        grouped: Dict[Any, Dict[str, Any]] = {}
        for lineno, fields in rows:
            if len(fields) != len(cls.header):
                raise ParseError(f'expected {len(cls.header)} fields, got {len(fields)}', path = path, line = lineno)
            q, spec, name, est, se, pct, n_obs = fields
            try:
                key = (int(q) if q not in ('', 'None') else None, RegressionSpec(spec))
                entry = grouped.setdefault(key, {'coefficients': {}, 'standard_errors': {}, 'adj_r2': float(pct) / 100.0, 'n_obs': int(n_obs)})
                entry['coefficients'][name] = float(est)
                entry['standard_errors'][name] = float(se)
            except ValueError as e:
                raise ParseError(str(e), path = path, line = lineno) from None
        return [RegressionResult(q = q, spec_name = spec, **entry) for (q, spec), entry in grouped.items()]


class RollingCsv(BasePack):
    header = ('window_end_date', 'coef_name', 'estimate', 'ci_low', 'ci_high')

    @classmethod
    def dumps(cls, rolling: RollingSeries) -> str:
        rows = [
            (w.window_end_date.isoformat(), name, w.result.coefficients[name], w.ci_low[name], w.ci_high[name])
            for w in rolling.windows
            for name in w.result.names
        ]
        return cls.write_rows(cls.header, rows)

    @staticmethod
    def filename(rolling: RollingSeries) -> str:
        return f'rolling_{rolling.spec_name.value}_q{rolling.q}.csv'


class RejectionCsv(BasePack):
    header = ('date', 'reason', 'detail')

    @classmethod
    def dumps(cls, rejections: Iterable[DayDecision]) -> str:
        rows = [
            (d.date.isoformat() if d.date else '', d.reason.value if d.reason else '', d.detail or '')
            for d in rejections
        ]
        return cls.write_rows(cls.header, rows)

    @classmethod
    def loads(cls, text: str, path: Optional[str] = None) -> pd.DataFrame:
        rows = cls.iter_rows(text, path)
        lineno, found = cls.read_header(rows, path)
        _expect_header(found, list(cls.header), path, lineno)
        records = [dict(zip(cls.header, fields + [''] * (3 - len(fields)))) for _, fields in rows]
        return pd.DataFrame(records, columns = list(cls.header))
