from serialvol.lib.exceptions import (
    SerialVolError,
    ConfigError,
    DataError,
)
