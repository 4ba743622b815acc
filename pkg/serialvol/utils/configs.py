import os
import datetime
import multiprocessing as mp

from typing import Optional, Dict, Any, List
from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from serialvol.lib.exceptions import ConfigError, InvalidSpec
from serialvol.types.options import InputKind, HarRefitMode, SeMode, SimModel
from serialvol.types.models import GridSpec, SimSpec


class SerialVolSettings(BaseSettings):
    """
    Process-wide settings, read from `SERIALVOL_*` environment variables
    """

    log_level: Optional[str] = 'INFO'
    num_workers: Optional[int] = Field(default = None, validate_default = True)
    float_format: Optional[str] = '%.17g'

    model_config = SettingsConfigDict(env_prefix = 'SERIALVOL_', case_sensitive = False, extra = 'ignore')

    @field_validator('num_workers', mode = 'before')
    def validate_num_workers(cls, v):
        return max(1, min(4, (mp.cpu_count() or 2) // 2)) if v is None else int(v)

    def update_config(self, **kwargs):
        """
        Updates the settings
        """
        for k, v in kwargs.items():
            if not hasattr(self, k): continue
            setattr(self, k, v)


_serialvol_settings: Optional[SerialVolSettings] = None

def get_serialvol_settings(**kwargs) -> SerialVolSettings:
    """
    Returns the serialvol settings
    """
    global _serialvol_settings
    if _serialvol_settings is None:
        _serialvol_settings = SerialVolSettings()
    if kwargs:
        _serialvol_settings.update_config(**kwargs)
    return _serialvol_settings

class ProxySettings:
    def __init__(self):
        self._settings = None

    def __getattr__(self, name):
        if self._settings is None:
            self._settings = get_serialvol_settings()
        return getattr(self._settings, name)

settings: SerialVolSettings = ProxySettings()


# Fields that locate files rather than change what is computed
PATH_FIELDS = ('inputs', 'output_dir', 'config_file', 'workers')


class PipelineConfig(BaseSettings):
    """
    Everything a command needs. Built from (lowest to highest precedence)
    defaults, `SERIALVOL_*` environment variables, a key-value config file
    and CLI flags.
    """

    inputs: List[str] = []
    input_kind: InputKind = InputKind.gridded
    output_dir: str = '.'
    config_file: Optional[str] = None

    # grid
    session_open: datetime.time = datetime.time(9, 0)
    session_close: datetime.time = datetime.time(16, 0)
    step_minutes: float = 5.0
    expected_returns: int = 84

    # statistics and regressions
    q_list: List[int] = [2, 3, 4, 5, 6]
    window_length: int = 1250
    level: float = 0.95
    har_mode: HarRefitMode = HarRefitMode.full_sample
    se_mode: SeMode = SeMode.ols
    rolling: bool = True
    workers: Optional[int] = None

    # simulation
    seed: int = 0
    sim_model: SimModel = SimModel.iid_gaussian
    days: int = 1000
    sigma: float = 1.0
    phi: float = 0.0
    beta0: float = 0.1
    beta_d: float = 0.4
    beta_w: float = 0.3
    beta_m: float = 0.2
    noise_sd: float = 0.3
    burn_in: int = 500
    start_date: datetime.date = datetime.date(2000, 1, 3)

    model_config = SettingsConfigDict(env_prefix = 'SERIALVOL_', case_sensitive = False, extra = 'ignore')

    @field_validator('inputs', 'q_list', mode = 'before')
    def split_lists(cls, v):
        if isinstance(v, str):
            return [item.strip() for item in v.split(',') if item.strip()]
        return v

    @model_validator(mode = 'after')
    def validate_config(self) -> 'PipelineConfig':
        if not self.q_list:
            raise InvalidSpec('q_list must name at least one aggregation level')
        for q in self.q_list:
            if q < 2:
                raise InvalidSpec(f'each q must be at least 2, got {q}')
        if len(set(self.q_list)) != len(self.q_list):
            raise InvalidSpec(f'q_list has duplicates: {self.q_list}')
        if not 0 < self.level < 1:
            raise InvalidSpec(f'confidence level must lie in (0, 1), got {self.level}')
        if self.window_length < 5:
            raise InvalidSpec(f'window_length must be at least 5, got {self.window_length}')
        if self.step_minutes <= 0:
            raise InvalidSpec(f'step_minutes must be positive, got {self.step_minutes}')
        return self

    def check_q_list(self) -> None:
        """
        Upper bound on q for commands that compute variance ratios;
        `simulate` never reads q_list and skips it.
        """
        for q in self.q_list:
            if q > self.expected_returns / 2:
                raise InvalidSpec(f'each q must satisfy 2 <= q <= expected_returns / 2 = {self.expected_returns / 2}, got {q}')

    @property
    def grid_spec(self) -> GridSpec:
        return GridSpec(
            session_open = self.session_open,
            session_close = self.session_close,
            step = datetime.timedelta(minutes = self.step_minutes),
            expected_returns = self.expected_returns,
        )

    @property
    def sim_spec(self) -> SimSpec:
        return SimSpec(
            model = self.sim_model,
            days = self.days,
            returns_per_day = self.expected_returns,
            seed = self.seed,
            sigma = self.sigma,
            phi = self.phi,
            beta0 = self.beta0,
            beta_d = self.beta_d,
            beta_w = self.beta_w,
            beta_m = self.beta_m,
            noise_sd = self.noise_sd,
            burn_in = self.burn_in,
            start_date = self.start_date,
        )

    @property
    def config_hash(self) -> str:
        from serialvol.utils.helpers import hash_config
        return hash_config(self.model_dump(mode = 'json', exclude = set(PATH_FIELDS)))

    def input_path(self, index: int = 0) -> str:
        if len(self.inputs) <= index:
            raise ConfigError(f'command needs at least {index + 1} input path(s), got {len(self.inputs)}')
        return self.inputs[index]

    def output_path(self, name: str) -> str:
        return os.path.join(self.output_dir, name) if '://' not in self.output_dir else f'{self.output_dir.rstrip("/")}/{name}'


def load_config_file(path: str) -> Dict[str, str]:
    """
    Reads a `key = value` config file. `#` starts a comment; list values are
    comma separated. Unknown keys are rejected with their line number.
    """
    import fsspec
    try:
        with fsspec.open(path, 'r', encoding = 'utf-8') as f:
            lines = f.read().splitlines()
    except (FileNotFoundError, OSError) as e:
        raise ConfigError(f'cannot read config file: {e}', path = path) from e

    values: Dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split('#', 1)[0].strip()
        if not line: continue
        if '=' not in line:
            raise ConfigError(f'expected `key = value`, got {raw!r}', path = path, line = lineno)
        key, value = (part.strip() for part in line.split('=', 1))
        key = key.lower().replace('-', '_')
        if key not in PipelineConfig.model_fields:
            raise ConfigError(f'unknown config key {key!r}', path = path, line = lineno)
        values[key] = value
    return values


def build_pipeline_config(config_file: Optional[str] = None, **overrides: Any) -> PipelineConfig:
    """
    Merges the config file (if any) with CLI overrides; overrides that are None are ignored.
    """
    values: Dict[str, Any] = load_config_file(config_file) if config_file else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    if config_file: values['config_file'] = config_file
    try:
        return PipelineConfig(**values)
    except ValidationError as e:
        raise ConfigError(f'invalid configuration: {e}') from e
