from serialvol.utils.logs import default_logger as logger, get_logger
from serialvol.utils.configs import (
    settings,
    get_serialvol_settings,
    PipelineConfig,
    build_pipeline_config,
)
from serialvol.utils.helpers import (
    timer,
    timed,
    hash_config,
    provenance_header,
    atomic_write_text,
)
from serialvol.utils.pooler import ThreadPooler
