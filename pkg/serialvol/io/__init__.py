from serialvol.io.base import BasePack
from serialvol.io.csv import (
    TickCsv,
    GriddedCsv,
    MetricsCsv,
    HarCsv,
    HarCoefficientsCsv,
    RegressionCsv,
    RollingCsv,
    RejectionCsv,
)
