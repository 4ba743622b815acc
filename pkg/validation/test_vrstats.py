import math
import datetime
import numpy as np
import pytest

from conftest import (
    beta_oracle,
    kernel_oracle,
    mean_oracle,
    variance_a_oracle,
    variance_c_oracle,
)
from serialvol.types import DayGrid
from serialvol.lib.exceptions import DegenerateDay, EmptyInput, SingularLambda, TooShort
from serialvol.lib.vrstats import (
    asymptotic_sd,
    beta_exponent,
    daily_metrics,
    dirichlet_kernel,
    sample_mean,
    summarize_vr,
    variance_a,
    variance_c,
    variance_ratio,
    variance_ratio_panel,
)


def test_sample_mean(rng):
    assert sample_mean([1.0, -1.0]) == 0.0
    assert sample_mean([0.1] * 84) == 0.1
    r = rng.normal(size = 84)
    assert sample_mean(r) == pytest.approx(mean_oracle(r), abs = 1e-14)
    with pytest.raises(EmptyInput):
        sample_mean([])


def test_variance_a(rng, alternating):
    assert variance_a([0.3] * 84) == 0.0
    assert variance_a(alternating) == pytest.approx(84 / 83, rel = 1e-15)
    r = rng.normal(size = 84)
    assert variance_a(r) == pytest.approx(variance_a_oracle(r), rel = 1e-12)
    with pytest.raises(TooShort):
        variance_a([1.0])


def test_variance_c(rng, alternating):
    sigma_c2, m = variance_c(alternating, 2)
    assert sigma_c2 == 0.0
    assert m == 2 * (84 - 2 + 1) * (1.0 - 2 / 84)
    assert variance_c([0.7] * 84, 4)[0] == 0.0
    r = rng.normal(size = 84)
    assert variance_c(r, 3)[0] == pytest.approx(variance_c_oracle(r, 3), rel = 1e-12)
    with pytest.raises(TooShort):
        variance_c(np.ones(5), 3)


@pytest.mark.parametrize('q', [1, 2, 3, 4, 5, 6])
def test_overlap_count_is_exact(q):
    n = 84
    assert variance_c(np.arange(n, dtype = float), q)[1] == q * (n - q + 1) * (1.0 - q / n)


def test_dirichlet_kernel():
    for lam in (0.3, 1.0, 2.5, -4.0):
        assert dirichlet_kernel(1, lam) == pytest.approx(1.0, abs = 1e-15)
    assert abs(dirichlet_kernel(2, math.pi)) < 1e-12
    lam = 2 * math.pi * 7 / 84
    assert dirichlet_kernel(6, lam) == pytest.approx(kernel_oracle(6, lam), abs = 1e-12)
    grid = 2 * math.pi * np.arange(1, 42) / 84
    np.testing.assert_allclose(dirichlet_kernel(4, grid), [kernel_oracle(4, x) for x in grid], atol = 1e-12)


def test_dirichlet_kernel_singular():
    with pytest.raises(SingularLambda):
        dirichlet_kernel(3, 0.0)
    with pytest.raises(SingularLambda):
        dirichlet_kernel(3, 2 * math.pi)


@pytest.mark.parametrize('n', [3, 4, 84, 85, 390])
def test_beta_is_one_third_for_q1(n):
    assert beta_exponent(n, 1) == pytest.approx(1.0 / 3.0, abs = 1e-12)


@pytest.mark.parametrize('q', [2, 3, 4, 5, 6])
def test_beta_matches_direct_summation(q):
    beta = beta_exponent(84, q)
    assert 0.0 < beta < 1.0
    assert beta == pytest.approx(beta_oracle(84, q), abs = 1e-12)


def test_beta_q2_closed_form_neighbourhood():
    # W_2(x) = 1 + cos(x); the large-n limit of beta is 1 - (2/3)(2.5 / 2.25)
    assert beta_exponent(84, 2) == pytest.approx(1.0 - (2.0 / 3.0) * (2.5 / 2.25), abs = 0.01)


def test_beta_decreases_with_q():
    assert beta_exponent(84, 6) < beta_exponent(84, 2)


def test_beta_too_short():
    with pytest.raises(TooShort):
        beta_exponent(2, 1)


def test_alternating_day_has_zero_vr(alternating):
    stat = variance_ratio(alternating, 2)
    assert stat.vr == 0.0
    assert stat.sigma_c2 == 0.0
    assert stat.sigma_a2 > 0


def test_constant_day_is_degenerate():
    with pytest.raises(DegenerateDay):
        variance_ratio(np.full(84, 0.001), 2)
    with pytest.raises(DegenerateDay):
        variance_ratio(np.zeros(84), 3)


def test_vr_assembly(rng):
    r = rng.normal(size = 84)
    for q in (2, 3, 6):
        stat = variance_ratio(r, q)
        assert stat.beta == beta_exponent(84, q)
        assert stat.vr == pytest.approx((stat.sigma_c2 / stat.sigma_a2) ** stat.beta, rel = 1e-14)
        assert stat.vr >= 0
        assert stat.m == q * (84 - q + 1) * (1.0 - q / 84)
        assert stat.asymptotic_sd == pytest.approx(
            stat.beta * math.sqrt(2 * (2 * q - 1) * (q - 1) / (3 * q * 84)), rel = 1e-14
        )


@pytest.mark.parametrize('scale', [1e-4, 1.0, 1e4])
def test_vr_scale_invariance(rng, scale):
    r = rng.normal(size = 84)
    for q in range(2, 7):
        assert abs(variance_ratio(scale * r, q).vr - variance_ratio(r, q).vr) <= 1e-10


def test_beta_does_not_depend_on_data(rng):
    a = variance_ratio(rng.normal(size = 84), 4)
    b = variance_ratio(rng.standard_t(3, size = 84), 4)
    assert a.beta == b.beta


def test_q1_gives_unit_ratio(rng):
    stat = variance_ratio(rng.normal(size = 84), 1)
    assert stat.vr == pytest.approx(1.0, abs = 1e-12)
    assert stat.asymptotic_sd == 0.0


def test_panel_matches_single_day(rng, alternating):
    panel = rng.normal(size = (50, 84))
    panel[7] = 0.002
    panel[9] = alternating
    # odd-length sums of +-1 alternate in sign: sigma_c2 = 84 / 395, sigma_a2 = 84 / 83
    expected_alternating = {2: 0.0, 5: (83.0 / 395.0) ** beta_exponent(84, 5)}
    for q in (2, 5):
        vr = variance_ratio_panel(panel, q, chunk_size = 16)
        assert np.isnan(vr[7])
        assert vr[9] == pytest.approx(expected_alternating[q], rel = 1e-12, abs = 1e-15)
        for i in range(50):
            if i == 7: continue
            assert vr[i] == pytest.approx(variance_ratio(panel[i], q).vr, abs = 1e-12)


def test_odd_q_on_alternating_day(alternating):
    assert variance_ratio(alternating, 5).vr == pytest.approx(0.7478578111198831, rel = 1e-12)
    assert variance_ratio(alternating, 3).vr > 0


@pytest.mark.parametrize('n, q', [(84, 84), (10, 20), (3, 6)])
def test_beta_when_q_is_a_multiple_of_n(n, q):
    with pytest.raises(SingularLambda):
        beta_exponent(n, q)


def test_daily_metrics(rng):
    r = rng.normal(0, 0.001, size = 84)
    m = daily_metrics(DayGrid(date = datetime.date(2001, 5, 4), returns = r), [2, 3, 4, 5, 6])
    assert m.rv == pytest.approx(math.fsum(x * x for x in r), rel = 1e-12)
    assert m.log_rv == pytest.approx(math.log(m.rv), rel = 1e-15)
    assert sorted(m.vr) == [2, 3, 4, 5, 6]
    assert m.vr[3] == variance_ratio(r, 3).vr
    row = m.row([2, 3, 4, 5, 6])
    assert list(row) == ['date', 'log_rv', 'vr_2', 'vr_3', 'vr_4', 'vr_5', 'vr_6']


def test_daily_metrics_carries_date_on_degenerate_day():
    day = DayGrid(date = datetime.date(2001, 5, 4), returns = np.zeros(84))
    with pytest.raises(DegenerateDay) as info:
        daily_metrics(day, [2])
    assert info.value.context['date'] == datetime.date(2001, 5, 4)


def test_summarize_vr(rng):
    days = [DayGrid(date = datetime.date(2001, 1, 1) + datetime.timedelta(days = i), returns = rng.normal(size = 84)) for i in range(20)]
    metrics = [daily_metrics(d, [2, 4]) for d in days]
    rows = summarize_vr(metrics, [2, 4], 84)
    assert [r['q'] for r in rows] == [2, 4]
    assert rows[0]['days'] == 20
    assert rows[1]['asymptotic_sd'] == asymptotic_sd(84, 4)
