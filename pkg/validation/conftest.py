"""
Shared fixtures and independent oracles for the validation suite.

The oracles deliberately avoid the library's code paths: explicit loops,
math.fsum, normal equations and the cosine-series form of the kernel.
"""

import math
import datetime
import numpy as np
import pandas as pd
import pytest

from serialvol.types.models import RvSeries


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full-scale runs, deselect with -m "not slow"')


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def alternating() -> np.ndarray:
    return np.array([1.0, -1.0] * 42)


"""
Oracles
"""

def mean_oracle(r) -> float:
    return math.fsum(r) / len(r)


def variance_a_oracle(r) -> float:
    mu = mean_oracle(r)
    return math.fsum((x - mu) ** 2 for x in r) / (len(r) - 1)


def variance_c_oracle(r, q: int) -> float:
    n = len(r)
    mu = mean_oracle(r)
    m = q * (n - q + 1) * (1.0 - q / n)
    total = []
    # 1-based k = q..n
    for k in range(q, n + 1):
        window = math.fsum(r[j - 1] for j in range(k - q + 1, k + 1))
        total.append((window - q * mu) ** 2)
    return math.fsum(total) / m


def kernel_oracle(k: int, lam: float) -> float:
    """
    Cosine-series form: 1 + 2 sum_{j<k} (1 - j/k) cos(j lam)
    """
    return 1.0 + 2.0 * math.fsum((1.0 - j / k) * math.cos(j * lam) for j in range(1, k))


def beta_oracle(n: int, q: int) -> float:
    w = [kernel_oracle(q, 2.0 * math.pi * j / n) for j in range(1, (n - 1) // 2 + 1)]
    s1 = math.fsum(w)
    s2 = math.fsum(x ** 2 for x in w)
    s3 = math.fsum(x ** 3 for x in w)
    return 1.0 - (2.0 / 3.0) * s1 * s3 / s2 ** 2


def normal_equations_oracle(y: np.ndarray, X: np.ndarray):
    """
    Returns (coefficients, standard errors, adjusted R^2) from (X'X)^-1 X'y
    """
    n, k = X.shape
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ (X.T @ y)
    resid = y - X @ beta
    s2 = resid @ resid / (n - k)
    se = np.sqrt(np.diag(s2 * xtx_inv))
    sst = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - (resid @ resid) / sst
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - k)
    return beta, se, adj


def har_rows_oracle(log_rv):
    """
    Hand-rolled HAR design rows: [1, x_{t-1}, mean(x_{t-5..t-1}), mean(x_{t-22..t-1})]
    """
    rows, response = [], []
    for t in range(22, len(log_rv)):
        rows.append([
            1.0,
            log_rv[t - 1],
            math.fsum(log_rv[t - 5:t]) / 5,
            math.fsum(log_rv[t - 22:t]) / 22,
        ])
        response.append(log_rv[t])
    return np.array(response), np.array(rows)


def noiseless_har_path(seed: int, generated: int = 30, betas = (0.1, 0.4, 0.3, 0.2)) -> np.ndarray:
    """
    22 random starting values followed by `generated` exact HAR steps
    """
    b0, bd, bw, bm = betas
    x = list(np.random.default_rng(seed).normal(-9.0, 1.0, size = 22))
    for _ in range(generated):
        x.append(b0 + bd * x[-1] + bw * np.mean(x[-5:]) + bm * np.mean(x[-22:]))
    return np.array(x)


def make_series(log_rv, start: str = '2001-01-02') -> RvSeries:
    return RvSeries.from_log_rv(pd.bdate_range(start, periods = len(log_rv)), log_rv)


@pytest.fixture
def random_series(rng) -> RvSeries:
    return make_series(rng.normal(-9.0, 0.5, size = 100))
