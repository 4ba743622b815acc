import datetime
import pytest

from serialvol.types import HarRefitMode, SimModel
from serialvol.lib.exceptions import ConfigError, InvalidSpec
from serialvol.utils.configs import (
    PipelineConfig,
    build_pipeline_config,
    get_serialvol_settings,
    load_config_file,
)


def test_defaults():
    config = PipelineConfig()
    assert config.q_list == [2, 3, 4, 5, 6]
    assert config.window_length == 1250
    assert config.level == 0.95
    assert config.grid_spec.expected_returns == 84
    assert config.grid_spec.step == datetime.timedelta(minutes = 5)


def test_file_values_are_parsed(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text(
        '# weekday session\n'
        'session_open = 09:30\n'
        'session_close = 16:00\n'
        'step-minutes = 5\n'
        'expected_returns = 78   # 6.5 hours\n'
        '\n'
        'q_list = 2, 4\n'
        'har_mode = per_window\n'
        'rolling = false\n'
    )
    config = build_pipeline_config(config_file = str(path))
    assert config.session_open == datetime.time(9, 30)
    assert config.expected_returns == 78
    assert config.q_list == [2, 4]
    assert config.har_mode == HarRefitMode.per_window
    assert config.rolling is False
    assert config.config_file == str(path)


def test_flags_override_file(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text('window_length = 500\nseed = 3\n')
    config = build_pipeline_config(config_file = str(path), window_length = 250, seed = None)
    assert config.window_length == 250
    assert config.seed == 3


def test_environment_is_lowest(tmp_path, monkeypatch):
    monkeypatch.setenv('SERIALVOL_WINDOW_LENGTH', '700')
    monkeypatch.setenv('SERIALVOL_SEED', '9')
    path = tmp_path / 'run.conf'
    path.write_text('seed = 4\n')
    config = build_pipeline_config(config_file = str(path))
    assert config.window_length == 700
    assert config.seed == 4


def test_unknown_key_names_line(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text('seed = 1\n\nwindow = 20\n')
    with pytest.raises(ConfigError) as e:
        load_config_file(str(path))
    assert e.value.context['line'] == 3


def test_line_without_equals(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text('seed 1\n')
    with pytest.raises(ConfigError):
        load_config_file(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        build_pipeline_config(config_file = str(tmp_path / 'absent.conf'))


@pytest.mark.parametrize('overrides', [
    {'q_list': '1,2'},
    {'q_list': '2,2'},
    {'level': 1.0},
    {'window_length': 3},
])
def test_invalid_values(overrides):
    with pytest.raises(InvalidSpec):
        build_pipeline_config(**overrides)


def test_q_bound_checked_on_use():
    config = build_pipeline_config(q_list = '2,43')
    with pytest.raises(InvalidSpec):
        config.check_q_list()
    build_pipeline_config(q_list = '2,42').check_q_list()


def test_simulate_ignores_q_bound():
    config = build_pipeline_config(expected_returns = 4, days = 3)
    assert config.q_list == [2, 3, 4, 5, 6]
    assert config.sim_spec.returns_per_day == 4


def test_unparseable_value_is_config_error():
    with pytest.raises(ConfigError):
        build_pipeline_config(window_length = 'long')


def test_bad_grid_surfaces_on_use():
    config = build_pipeline_config(expected_returns = 80, q_list = '2')
    with pytest.raises(InvalidSpec):
        config.grid_spec


def test_sim_spec_carries_values():
    config = build_pipeline_config(sim_model = 'ar1', phi = 0.3, days = 10, seed = 5)
    spec = config.sim_spec
    assert spec.model == SimModel.ar1
    assert (spec.phi, spec.days, spec.seed, spec.returns_per_day) == (0.3, 10, 5, 84)


def test_hash_ignores_paths():
    a = build_pipeline_config(inputs = ['a.csv'], output_dir = 'x', workers = 1)
    b = build_pipeline_config(inputs = ['b.csv'], output_dir = 'y', workers = 4)
    c = build_pipeline_config(inputs = ['a.csv'], output_dir = 'x', seed = 1)
    assert a.config_hash == b.config_hash
    assert a.config_hash != c.config_hash


def test_output_path():
    assert build_pipeline_config(output_dir = 'out').output_path('metrics.csv').endswith('out/metrics.csv')
    assert build_pipeline_config(output_dir = 's3://bucket/run/').output_path('metrics.csv') == 's3://bucket/run/metrics.csv'


def test_input_path_requires_inputs():
    with pytest.raises(ConfigError):
        PipelineConfig().input_path(0)


def test_settings_update():
    settings = get_serialvol_settings()
    assert settings.num_workers >= 1
    fmt = settings.float_format
    get_serialvol_settings(float_format = '%.10g')
    assert get_serialvol_settings().float_format == '%.10g'
    get_serialvol_settings(float_format = fmt)
