from __future__ import absolute_import

from serialvol.version import VERSION
from serialvol.lib.exceptions import SerialVolError, ConfigError, DataError
from serialvol.types import *
from serialvol.lib.grid import (
    grid_instants,
    log_returns,
    previous_tick_resample,
    validate_day,
    resample_ticks,
)
from serialvol.lib.vrstats import (
    sample_mean,
    variance_a,
    variance_c,
    dirichlet_kernel,
    beta_exponent,
    variance_ratio,
    variance_ratio_panel,
    daily_metrics,
)
from serialvol.lib.realized import (
    realized_variance,
    heterogeneous_average,
    heterogeneous_averages,
)
from serialvol.lib.har import build_har_design, fit_har
from serialvol.lib.regress import (
    ols,
    regression_simple,
    regression_lagged,
    regression_decomposed,
    RegressionInputs,
    full_sample_regressions,
    rolling_regression,
    format_table,
)
from serialvol.lib.simulate import (
    gen_iid,
    gen_ar1,
    gen_har_cascade,
    gen_panel,
    pooled_autocorrelation,
    sample_autocorrelation,
)
