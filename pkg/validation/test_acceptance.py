"""
End-to-end properties on synthetic markets: the VR null distribution, the
sign of VR - 1 under serial correlation, HAR recovery, coefficient recovery
in the decomposed regression and the full pipeline's outputs.
"""

import time
import numpy as np
import pandas as pd
import pytest

from serialvol.types import RegressionSpec, RvSeries, SimModel, SimSpec
from serialvol.io import BasePack, MetricsCsv
from serialvol.lib.har import fit_har
from serialvol.lib.regress import regression_decomposed
from serialvol.lib.simulate import gen_panel
from serialvol.lib.vrstats import asymptotic_sd, daily_metrics, variance_ratio_panel
from serialvol.cli.functions import cmd_pipeline
from serialvol.utils.configs import build_pipeline_config

Q_LIST = [2, 3, 4, 5, 6]


@pytest.fixture(scope = 'module')
def iid_panel() -> np.ndarray:
    return gen_panel(SimSpec(model = SimModel.iid_gaussian, days = 100_000, seed = 1)).returns


@pytest.mark.parametrize('q', Q_LIST)
def test_iid_vr_is_centred_on_one(iid_panel, q):
    vr = variance_ratio_panel(iid_panel, q)
    assert np.all(np.isfinite(vr))
    assert 0.98 <= vr.mean() <= 1.02
    assert vr.std(ddof = 1) == pytest.approx(asymptotic_sd(84, q), rel = 0.15)


def ar1_mean_vr(phi: float, q: int = 2, days: int = 10_000) -> float:
    panel = gen_panel(SimSpec(model = SimModel.ar1, days = days, seed = 17, phi = phi)).returns
    return float(np.mean(variance_ratio_panel(panel, q)))


def test_positive_serial_correlation_raises_vr():
    assert ar1_mean_vr(0.3) > 1.0
    assert ar1_mean_vr(-0.3) < 1.0


def test_strong_negative_correlation_collapses_vr():
    assert ar1_mean_vr(-0.99) < 0.5


def test_har_recovery_on_generated_path():
    spec = SimSpec(model = SimModel.har_cascade, days = 10_000, seed = 23, returns_per_day = 2)
    panel = gen_panel(spec)
    series = RvSeries.from_log_rv(panel.dates, panel.log_variance.to_numpy())
    fit = fit_har(series)
    truth = {'beta0': spec.beta0, 'beta_d': spec.beta_d, 'beta_w': spec.beta_w, 'beta_m': spec.beta_m}
    for name, value in truth.items():
        assert abs(fit.coefficients[name] - value) < 3 * fit.standard_errors[name], name


def test_decomposed_coefficient_recovery():
    spec = SimSpec(model = SimModel.har_cascade, days = 4344, seed = 31)
    panel = gen_panel(spec)
    metrics = [daily_metrics(day, [2]) for day in panel.days()]
    fit = fit_har(RvSeries.from_metrics(metrics))
    noise = np.random.default_rng(31).normal(0.0, 0.05, size = fit.n_obs)
    vr = pd.Series(1.0 - 0.5 * fit.sigma_p.to_numpy() + 0.8 * fit.sigma_u.to_numpy() + noise, index = fit.dates)
    res = regression_decomposed(vr, fit)
    assert abs(res.coefficients['coef_expected'] + 0.5) < 3 * res.standard_errors['coef_expected']
    assert abs(res.coefficients['coef_unexpected'] - 0.8) < 3 * res.standard_errors['coef_unexpected']


@pytest.fixture(scope = 'module')
def pipeline_run(tmp_path_factory):
    out = tmp_path_factory.mktemp('pipeline')
    config = build_pipeline_config(
        input_kind = 'simulated',
        sim_model = 'har_cascade',
        days = 1522,
        seed = 5,
        window_length = 1250,
        output_dir = str(out),
    )
    return config, cmd_pipeline(config)


def test_pipeline_matches_library_calls(pipeline_run):
    config, out = pipeline_run
    panel = gen_panel(config.sim_spec)
    expected = [daily_metrics(day, Q_LIST) for day in panel.days()]
    assert [m.model_dump() for m in out['metrics']] == [m.model_dump() for m in expected]
    written = MetricsCsv.load(config.output_path('metrics.csv'))
    assert [m.vr for m in written] == [m.vr for m in expected]
    fit = fit_har(RvSeries.from_metrics(expected))
    assert out['har'].coefficients == fit.coefficients


def test_pipeline_output_schema(pipeline_run):
    config, out = pipeline_run
    assert len(out['regressions']) == len(Q_LIST) * 3
    full = BasePack.read_frame(config.output_path('regression_full_sample.csv'))
    assert list(full.columns) == ['q', 'spec', 'coef_name', 'estimate', 'std_error', 'adj_r2_pct', 'n_obs']
    cells = full.groupby(['q', 'spec']).size()
    assert len(cells) == 15
    for spec in RegressionSpec:
        assert all(cells[(q, spec.value)] == len(spec.coef_names) for q in Q_LIST)
    assert (full['n_obs'] == 1500).all()
    assert len(out['rolling']) == 15
    assert all(len(series) == 251 for series in out['rolling'])
    table = BasePack.read_frame(config.output_path('rolling_decomposed_q6.csv'))
    assert len(table) == 251 * 3


@pytest.mark.slow
def test_full_scale_pipeline(tmp_path):
    config = build_pipeline_config(
        input_kind = 'simulated',
        sim_model = 'har_cascade',
        days = 4344,
        seed = 11,
        window_length = 1250,
        output_dir = str(tmp_path),
    )
    started = time.perf_counter()
    out = cmd_pipeline(config)
    elapsed = time.perf_counter() - started
    assert len(out['metrics']) == 4344
    assert len(out['regressions']) == len(Q_LIST) * 3
    assert len(out['rolling']) == len(Q_LIST) * 3
    assert all(len(series) == 3073 for series in out['rolling'])
    assert elapsed < 120
