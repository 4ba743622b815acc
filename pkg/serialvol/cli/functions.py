"""
serialvol CLI Handlers

Each `cmd_*` reads its inputs from the paths in the config, writes its
outputs (atomically, with the provenance header) under `output_dir` and
returns what it computed. The `run_*` helpers take in-memory inputs so the
pipeline can chain stages without re-reading files.
"""


from typing import Dict, List, Optional, Tuple
from serialvol.types.options import InputKind, RegressionSpec, RejectReason
from serialvol.types.models import DailyMetrics, DayDecision, DayGrid, HarFit, RegressionResult, RollingSeries
from serialvol.lib.exceptions import DataError, DegenerateDay, SeriesTooShort
from serialvol.io.csv import (
    GriddedCsv,
    HarCoefficientsCsv,
    HarCsv,
    MetricsCsv,
    RegressionCsv,
    RejectionCsv,
    RollingCsv,
    TickCsv,
)
from serialvol.utils.configs import PipelineConfig
from serialvol.utils.helpers import atomic_write_text, provenance_header, timer
from serialvol.utils.logs import default_logger as logger
from serialvol.utils.pooler import ThreadPooler

GRIDDED_FILE = 'gridded.csv'
RESAMPLE_REJECTIONS_FILE = 'resample_rejections.csv'
METRICS_FILE = 'metrics.csv'
METRICS_REJECTIONS_FILE = 'metrics_rejections.csv'
HAR_FILE = 'har.csv'
HAR_COEFFICIENTS_FILE = 'har_coefficients.csv'
REGRESSION_FILE = 'regression_full_sample.csv'
REGRESSION_TABLE_FILE = 'regression_table.txt'


def _write(codec, obj, config: PipelineConfig, name: str, *args) -> str:
    path = config.output_path(name)
    codec.dump(obj, path, *args, config_hash = config.config_hash)
    logger.info(f'wrote {path}')
    return path


"""
resample
"""

def run_resample(ticks, config: PipelineConfig) -> Tuple[List[DayGrid], List[DayDecision]]:
    from serialvol.lib.grid import resample_ticks
    days, rejections = resample_ticks(ticks, config.grid_spec, workers = config.workers)
    _write(GriddedCsv, days, config, GRIDDED_FILE, config.expected_returns)
    _write(RejectionCsv, rejections, config, RESAMPLE_REJECTIONS_FILE)
    logger.status('accepted', f'{len(days)} days gridded, {len(rejections)} rejected')
    return days, rejections


def cmd_resample(config: PipelineConfig) -> Tuple[List[DayGrid], List[DayDecision]]:
    """
    Tick CSV -> gridded CSV plus a rejection log
    """
    t = timer()
    ticks = TickCsv.load(config.input_path(0))
    result = run_resample(ticks, config)
    timer(t, 'resample finished')
    return result


"""
metrics
"""

def _day_metrics(day: DayGrid, q_list: List[int]) -> Tuple[Optional[DailyMetrics], Optional[DayDecision]]:
    from serialvol.lib.vrstats import daily_metrics
    try:
        return daily_metrics(day, q_list), None
    except DegenerateDay as e:
        return None, DayDecision.reject(RejectReason.degenerate_day, date = day.date, detail = e.render())


def run_metrics(days: List[DayGrid], config: PipelineConfig) -> List[DailyMetrics]:
    config.check_q_list()
    from serialvol.lib.grid import accepted_days
    from serialvol.lib.vrstats import summarize_vr
    days, rejections = accepted_days(days, config.grid_spec)
    metrics = []
    for day, (metric, decision) in zip(days, ThreadPooler.map(_day_metrics, days, config.q_list, workers = config.workers)):
        if metric is not None:
            metrics.append(metric)
            continue
        with logger.contextualize(date = day.date):
            logger.status('degenerate', decision.detail, level = 'warning')
        rejections.append(decision)
    rejections.sort(key = lambda d: d.date)
    if not metrics:
        raise DataError('no day survived validation', days = len(days))
    _write(MetricsCsv, metrics, config, METRICS_FILE, config.q_list)
    _write(RejectionCsv, rejections, config, METRICS_REJECTIONS_FILE)
    logger.display_table(summarize_vr(metrics, config.q_list, config.expected_returns))
    return metrics


def cmd_metrics(config: PipelineConfig) -> List[DailyMetrics]:
    """
    Gridded CSV -> daily log RV and VR(q) per accepted day
    """
    t = timer()
    days = GriddedCsv.load(config.input_path(0))
    metrics = run_metrics(days, config)
    timer(t, 'metrics finished')
    return metrics


"""
har
"""

def run_har(metrics: List[DailyMetrics], config: PipelineConfig) -> HarFit:
    from serialvol.lib.har import fit_har
    from serialvol.types.models import RvSeries
    fit = fit_har(RvSeries.from_metrics(metrics), se_mode = config.se_mode)
    _write(HarCsv, fit, config, HAR_FILE)
    _write(HarCoefficientsCsv, fit, config, HAR_COEFFICIENTS_FILE)
    logger.status('fitted', f'HAR on {fit.n_obs} days, adj. R2 {100 * fit.adj_r2:.2f}%')
    logger.display_table({
        name: f'{fit.coefficients[name]:.6f} [{fit.standard_errors[name]:.6f}]'
        for name in fit.coefficients
    })
    return fit


def cmd_har(config: PipelineConfig) -> HarFit:
    """
    Metrics CSV -> HAR decomposition and coefficients
    """
    t = timer()
    metrics = MetricsCsv.load(config.input_path(0))
    fit = run_har(metrics, config)
    timer(t, 'har finished')
    return fit


"""
regress
"""

def run_regress(metrics: List[DailyMetrics], config: PipelineConfig) -> Tuple[List[RegressionResult], List[RollingSeries]]:
    from serialvol.lib.regress import RegressionInputs, format_table, full_sample_regressions, rolling_regression
    missing = [q for q in config.q_list if q not in metrics[0].vr]
    if missing:
        raise DataError(f'metrics hold no vr column for q in {missing}')
    inputs = RegressionInputs.from_metrics(metrics, config.q_list)
    results = full_sample_regressions(inputs, config.q_list, se_mode = config.se_mode)
    _write(RegressionCsv, results, config, REGRESSION_FILE)
    table = format_table(results)
    atomic_write_text(config.output_path(REGRESSION_TABLE_FILE), provenance_header(config.config_hash) + '\n' + table)
    logger.info(f'full-sample regressions over {len(inputs.dates)} days\n{table}')

    rolling = []
    if not config.rolling: return results, rolling
    for q in config.q_list:
        for spec in RegressionSpec:
            try:
                series = rolling_regression(
                    spec,
                    inputs,
                    q,
                    window_length = config.window_length,
                    level = config.level,
                    har_mode = config.har_mode,
                    se_mode = config.se_mode,
                    workers = config.workers,
                )
            except SeriesTooShort as e:
                raise e.with_context(spec = spec.value)
            _write(RollingCsv, series, config, RollingCsv.filename(series))
            rolling.append(series)
    return results, rolling


def cmd_regress(config: PipelineConfig) -> Tuple[List[RegressionResult], List[RollingSeries]]:
    """
    Metrics CSV -> full-sample regression table and rolling-window CSVs
    """
    t = timer()
    metrics = MetricsCsv.load(config.input_path(0))
    result = run_regress(metrics, config)
    timer(t, 'regress finished')
    return result


"""
simulate
"""

def cmd_simulate(config: PipelineConfig) -> List[DayGrid]:
    """
    SimSpec -> synthetic gridded CSV
    """
    from serialvol.lib.simulate import gen_panel
    t = timer()
    panel = gen_panel(config.sim_spec, workers = config.workers)
    days = panel.days()
    _write(GriddedCsv, days, config, GRIDDED_FILE, config.expected_returns)
    timer(t, 'simulate finished')
    return days


"""
pipeline
"""

def cmd_pipeline(config: PipelineConfig) -> Dict[str, object]:
    """
    Runs the full chain from the configured input kind, writing every
    intermediate file.
    """
    t = timer()
    config.check_q_list()
    if config.input_kind == InputKind.simulated:
        days = cmd_simulate(config)
    elif config.input_kind == InputKind.tick:
        days, _ = run_resample(TickCsv.load(config.input_path(0)), config)
    else:
        days = GriddedCsv.load(config.input_path(0))
    metrics = run_metrics(days, config)
    fit = run_har(metrics, config)
    results, rolling = run_regress(metrics, config)
    timer(t, 'pipeline finished')
    return {'metrics': metrics, 'har': fit, 'regressions': results, 'rolling': rolling}


