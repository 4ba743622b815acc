"""
serialvol CLI
"""

import sys
import typer
import functools

from typing import List, Optional

_help = """
serialvol CLI

Usage:
    serialvol <command> [inputs] [options]

Commands:
    resample: Previous-tick resample a tick CSV onto the intraday grid
    metrics: Daily log RV and variance ratios from a gridded CSV
    har: Fit the HAR model on a metrics CSV
    regress: Full-sample and rolling VR regressions on a metrics CSV
    simulate: Write a synthetic gridded CSV
    pipeline: Run the full chain

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

cmd = typer.Typer(no_args_is_help = True, help = _help)


_Inputs = typer.Argument(None, help = 'Input file(s)')
_OutputDir = typer.Option(None, '--output-dir', '-o', help = 'Directory for the output files')
_ConfigFile = typer.Option(None, '--config', '-c', help = 'Key-value config file; flags override it')
_Workers = typer.Option(None, help = 'Worker threads over days / windows')
_SessionOpen = typer.Option(None, help = 'Session open, HH:MM[:SS]')
_SessionClose = typer.Option(None, help = 'Session close, HH:MM[:SS]')
_StepMinutes = typer.Option(None, help = 'Grid step in minutes')
_ExpectedReturns = typer.Option(None, help = 'Intraday returns per day')
_QList = typer.Option(None, '--q-list', '-q', help = 'Comma separated aggregation levels, e.g. 2,3,4,5,6')
_WindowLength = typer.Option(None, help = 'Rolling window length in trading days')
_Level = typer.Option(None, help = 'Confidence level of the rolling bands')
_HarMode = typer.Option(None, help = 'HAR fit used by rolling regressions: full_sample | per_window')
_SeMode = typer.Option(None, help = 'Standard errors: ols | white')
_Rolling = typer.Option(None, '--rolling/--no-rolling', help = 'Whether to run the rolling regressions')
_Model = typer.Option(None, '--model', help = 'iid_gaussian | ar1 | har_cascade')
_Seed = typer.Option(None, help = 'Simulation seed (64-bit unsigned)')
_Days = typer.Option(None, help = 'Simulated days')
_Sigma = typer.Option(None, help = 'Return standard deviation (iid_gaussian, ar1)')
_Phi = typer.Option(None, help = 'AR(1) coefficient')
_Beta0 = typer.Option(None, help = 'HAR intercept')
_BetaD = typer.Option(None, help = 'HAR daily coefficient')
_BetaW = typer.Option(None, help = 'HAR weekly coefficient')
_BetaM = typer.Option(None, help = 'HAR monthly coefficient')
_NoiseSd = typer.Option(None, help = 'HAR log-variance shock standard deviation')
_BurnIn = typer.Option(None, help = 'HAR burn-in days')
_StartDate = typer.Option(None, help = 'First synthetic date, YYYY-MM-DD')
_InputKind = typer.Option(None, help = 'tick | gridded | simulated')


def handle_errors(func):
    """
    Logs SerialVolErrors and turns them into their exit code
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        from serialvol.lib.exceptions import SerialVolError
        from serialvol.utils.logs import default_logger as logger
        try:
            return func(*args, **kwargs)
        except SerialVolError as e:
            logger.status('error', f'{e.reason}: {e.render()}', level = 'error')
            raise typer.Exit(code = e.exit_code) from e
    return wrapper


def _config(inputs: Optional[List[str]], config_file: Optional[str], **overrides):
    from serialvol.utils.configs import build_pipeline_config
    if inputs: overrides['inputs'] = inputs
    return build_pipeline_config(config_file = config_file, **overrides)


@cmd.command('resample', help = 'Previous-tick resample a tick CSV onto the intraday grid')
@handle_errors
def resample_cmd(
    inputs: Optional[List[str]] = _Inputs,
    output_dir: Optional[str] = _OutputDir,
    config_file: Optional[str] = _ConfigFile,
    session_open: Optional[str] = _SessionOpen,
    session_close: Optional[str] = _SessionClose,
    step_minutes: Optional[float] = _StepMinutes,
    expected_returns: Optional[int] = _ExpectedReturns,
    workers: Optional[int] = _Workers,
):
    """
    Usage:
    Writes gridded.csv and resample_rejections.csv

    $ serialvol resample ticks.csv -o out/

    """
    from .functions import cmd_resample
    config = _config(
        inputs, config_file,
        output_dir = output_dir,
        session_open = session_open,
        session_close = session_close,
        step_minutes = step_minutes,
        expected_returns = expected_returns,
        workers = workers,
    )
    days, rejections = cmd_resample(config)
    typer.echo(f'{len(days)} days gridded, {len(rejections)} rejected')


@cmd.command('metrics', help = 'Daily log RV and variance ratios from a gridded CSV')
@handle_errors
def metrics_cmd(
    inputs: Optional[List[str]] = _Inputs,
    output_dir: Optional[str] = _OutputDir,
    config_file: Optional[str] = _ConfigFile,
    expected_returns: Optional[int] = _ExpectedReturns,
    q_list: Optional[str] = _QList,
    workers: Optional[int] = _Workers,
):
    """
    Usage:
    Writes metrics.csv and metrics_rejections.csv

    $ serialvol metrics gridded.csv -o out/ -q 2,3,4,5,6

    """
    from .functions import cmd_metrics
    config = _config(
        inputs, config_file,
        output_dir = output_dir,
        expected_returns = expected_returns,
        q_list = q_list,
        workers = workers,
    )
    metrics = cmd_metrics(config)
    typer.echo(f'{len(metrics)} days of metrics')


@cmd.command('har', help = 'Fit the HAR model on a metrics CSV')
@handle_errors
def har_cmd(
    inputs: Optional[List[str]] = _Inputs,
    output_dir: Optional[str] = _OutputDir,
    config_file: Optional[str] = _ConfigFile,
    se_mode: Optional[str] = _SeMode,
):
    """
    Usage:
    Writes har.csv (date,log_rv,sigma_p,sigma_u) and har_coefficients.csv

    $ serialvol har out/metrics.csv -o out/

    """
    from .functions import cmd_har
    config = _config(inputs, config_file, output_dir = output_dir, se_mode = se_mode)
    fit = cmd_har(config)
    typer.echo(' '.join(f'{k}={v:.6f}' for k, v in fit.coefficients.items()))


@cmd.command('regress', help = 'Full-sample and rolling VR regressions on a metrics CSV')
@handle_errors
def regress_cmd(
    inputs: Optional[List[str]] = _Inputs,
    output_dir: Optional[str] = _OutputDir,
    config_file: Optional[str] = _ConfigFile,
    q_list: Optional[str] = _QList,
    window_length: Optional[int] = _WindowLength,
    level: Optional[float] = _Level,
    har_mode: Optional[str] = _HarMode,
    se_mode: Optional[str] = _SeMode,
    rolling: Optional[bool] = _Rolling,
    workers: Optional[int] = _Workers,
):
    """
    Usage:
    Writes regression_full_sample.csv, regression_table.txt and one
    rolling_<spec>_q<q>.csv per spec and q

    $ serialvol regress out/metrics.csv -o out/ --window-length 1250

    """
    from .functions import cmd_regress
    config = _config(
        inputs, config_file,
        output_dir = output_dir,
        q_list = q_list,
        window_length = window_length,
        level = level,
        har_mode = har_mode,
        se_mode = se_mode,
        rolling = rolling,
        workers = workers,
    )
    results, rolling_series = cmd_regress(config)
    typer.echo(f'{len(results)} full-sample regressions, {len(rolling_series)} rolling series')


@cmd.command('simulate', help = 'Write a synthetic gridded CSV')
@handle_errors
def simulate_cmd(
    output_dir: Optional[str] = _OutputDir,
    config_file: Optional[str] = _ConfigFile,
    model: Optional[str] = _Model,
    seed: Optional[int] = _Seed,
    days: Optional[int] = _Days,
    expected_returns: Optional[int] = _ExpectedReturns,
    sigma: Optional[float] = _Sigma,
    phi: Optional[float] = _Phi,
    beta0: Optional[float] = _Beta0,
    beta_d: Optional[float] = _BetaD,
    beta_w: Optional[float] = _BetaW,
    beta_m: Optional[float] = _BetaM,
    noise_sd: Optional[float] = _NoiseSd,
    burn_in: Optional[int] = _BurnIn,
    start_date: Optional[str] = _StartDate,
    workers: Optional[int] = _Workers,
):
    """
    Usage:
    Writes gridded.csv from the simulation settings

    $ serialvol simulate -o out/ --model ar1 --phi 0.3 --days 10000 --seed 7

    """
    from .functions import cmd_simulate
    config = _config(
        None, config_file,
        output_dir = output_dir,
        sim_model = model,
        seed = seed,
        days = days,
        expected_returns = expected_returns,
        sigma = sigma,
        phi = phi,
        beta0 = beta0,
        beta_d = beta_d,
        beta_w = beta_w,
        beta_m = beta_m,
        noise_sd = noise_sd,
        burn_in = burn_in,
        start_date = start_date,
        workers = workers,
    )
    grids = cmd_simulate(config)
    typer.echo(f'{len(grids)} synthetic days')


@cmd.command('pipeline', help = 'Run the full chain: [simulate | resample] -> metrics -> har -> regress')
@handle_errors
def pipeline_cmd(
    inputs: Optional[List[str]] = _Inputs,
    output_dir: Optional[str] = _OutputDir,
    config_file: Optional[str] = _ConfigFile,
    input_kind: Optional[str] = _InputKind,
    session_open: Optional[str] = _SessionOpen,
    session_close: Optional[str] = _SessionClose,
    step_minutes: Optional[float] = _StepMinutes,
    expected_returns: Optional[int] = _ExpectedReturns,
    q_list: Optional[str] = _QList,
    window_length: Optional[int] = _WindowLength,
    level: Optional[float] = _Level,
    har_mode: Optional[str] = _HarMode,
    se_mode: Optional[str] = _SeMode,
    rolling: Optional[bool] = _Rolling,
    model: Optional[str] = _Model,
    seed: Optional[int] = _Seed,
    days: Optional[int] = _Days,
    sigma: Optional[float] = _Sigma,
    phi: Optional[float] = _Phi,
    noise_sd: Optional[float] = _NoiseSd,
    workers: Optional[int] = _Workers,
):
    """
    Usage:
    Runs every stage, writing each intermediate file to the output directory

    $ serialvol pipeline --input-kind simulated --model har_cascade --days 4344 -o out/
    $ serialvol pipeline ticks.csv --input-kind tick -o out/

    """
    from .functions import cmd_pipeline
    config = _config(
        inputs, config_file,
        output_dir = output_dir,
        input_kind = input_kind,
        session_open = session_open,
        session_close = session_close,
        step_minutes = step_minutes,
        expected_returns = expected_returns,
        q_list = q_list,
        window_length = window_length,
        level = level,
        har_mode = har_mode,
        se_mode = se_mode,
        rolling = rolling,
        sim_model = model,
        seed = seed,
        days = days,
        sigma = sigma,
        phi = phi,
        noise_sd = noise_sd,
        workers = workers,
    )
    out = cmd_pipeline(config)
    typer.echo(f'{len(out["metrics"])} days, {len(out["regressions"])} full-sample regressions, {len(out["rolling"])} rolling series')


# typer bundles its own click; resolve its usage error through the public BadParameter
_UsageError = next(c for c in typer.BadParameter.__mro__ if c.__name__ == 'UsageError')


def main(args: Optional[List[str]] = None):
    """
    Console entry point; usage errors exit with 1 instead of 2
    """
    try:
        code = cmd(args = args, standalone_mode = False)
    except _UsageError as e:
        e.show()
        sys.exit(1)
    except typer.Abort:
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == '__main__':
    main()
