from __future__ import absolute_import

from serialvol.types.options import (
    InputKind,
    RejectReason,
    Horizon,
    RegressionSpec,
    HarRefitMode,
    SeMode,
    SimModel,
)
from serialvol.types.models import (
    TickSeries,
    GridSpec,
    DayGrid,
    DayDecision,
    VrStat,
    DailyMetrics,
    RvSeries,
    HarDesign,
    HarFit,
    HAR_COEF_NAMES,
    OlsResult,
    RegressionResult,
    RollingWindow,
    RollingSeries,
    SimSpec,
    SimPanel,
)
