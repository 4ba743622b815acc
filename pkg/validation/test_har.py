import numpy as np
import pytest

from conftest import har_rows_oracle, make_series, noiseless_har_path
from serialvol.types import HAR_COEF_NAMES
from serialvol.lib.exceptions import InsufficientHistory, RankDeficient
from serialvol.lib.har import build_har_design, fit_har
from serialvol.lib.regress import ols


def test_design_boundary(rng):
    assert build_har_design(make_series(rng.normal(size = 23))).n_obs == 1
    with pytest.raises(InsufficientHistory):
        build_har_design(make_series(rng.normal(size = 22)))


def test_constant_series_design_rows():
    design = build_har_design(make_series(np.full(40, -9.25))).design
    np.testing.assert_allclose(design, np.tile([1.0, -9.25, -9.25, -9.25], (18, 1)), rtol = 1e-14)


def test_design_matches_oracle(random_series):
    har = build_har_design(random_series)
    response, rows = har_rows_oracle(list(random_series.log_rv))
    assert har.n_obs == 78
    np.testing.assert_allclose(har.response, response, rtol = 1e-14)
    np.testing.assert_allclose(har.design, rows, rtol = 1e-13)
    assert har.dates[0] == random_series.dates[22]


def test_constant_series_is_rank_deficient():
    with pytest.raises(RankDeficient):
        fit_har(make_series(np.full(60, -9.0)))


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_noiseless_recovery(seed):
    fit = fit_har(make_series(noiseless_har_path(seed)))
    for name, truth in zip(HAR_COEF_NAMES, (0.1, 0.4, 0.3, 0.2)):
        assert fit.coefficients[name] == pytest.approx(truth, abs = 1e-8)
    assert fit.persistence == pytest.approx(0.9, abs = 1e-8)


def test_decomposition_identities(random_series):
    fit = fit_har(random_series)
    assert fit.n_obs == len(random_series) - 22
    np.testing.assert_allclose((fit.sigma_p + fit.sigma_u).to_numpy(), random_series.log_rv[22:], rtol = 0, atol = 1e-10)
    resid = fit.sigma_u.to_numpy()
    assert abs(resid.mean()) <= 1e-10 * resid.std()
    design = build_har_design(random_series).design
    for column in design.T:
        assert abs(column @ resid) <= 1e-8 * np.linalg.norm(column) * np.linalg.norm(resid)
    var_total = np.var(random_series.log_rv[22:])
    assert np.var(resid) == pytest.approx(var_total - np.var(fit.sigma_p.to_numpy()), rel = 1e-8)
    assert all(se > 0 for se in fit.standard_errors.values())


def test_refit_on_fitted_values_is_self_consistent(random_series):
    fit = fit_har(random_series)
    design = build_har_design(random_series).design
    refit = ols(fit.sigma_p.to_numpy(), design)
    np.testing.assert_allclose(refit.coefficients, [fit.coefficients[k] for k in HAR_COEF_NAMES], rtol = 0, atol = 1e-10)


def test_frame_and_slicing(random_series):
    fit = fit_har(random_series)
    frame = fit.frame()
    assert list(frame.columns) == ['log_rv', 'sigma_p', 'sigma_u']
    assert frame.index.equals(random_series.dates[22:])

    part = fit_har(random_series, start = 10, stop = 70)
    assert part.n_obs == 60 - 22
    assert part.dates[0] == random_series.dates[32]
    assert part.dates[-1] == random_series.dates[69]
