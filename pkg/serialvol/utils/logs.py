import sys
import logging
import warnings
import atexit as _atexit

from loguru import _defaults
from loguru._logger import Core as _Core
from loguru._logger import Logger as _Logger
from typing import Any, Dict, List, Union

# numpy emits these for degenerate windows that are handled explicitly
warnings.filterwarnings('ignore', message = 'invalid value encountered in scalar divide')
warnings.filterwarnings('ignore', message = 'Mean of empty slice')


STATUS_COLOR = {
    'accepted': 'green',
    'rejected': 'yellow',
    'degenerate': 'yellow',
    'fitted': 'green',
    'error': 'red',
    'window': 'cyan',
    'simulate': 'light-blue',
}
FALLBACK_STATUS_COLOR = 'magenta'


class Logger(_Logger):

    def display_table(self, message: Union[Dict[str, Any], List[Any], Any], *args, level: str = 'info', **kwargs):
        """
        Display a coefficient report (or any mapping) in the log.

        Parameters
        ----------
        message : Any
            A dict of name -> value, a list of such dicts (one row each), or a plain value.
        level : str
            The log level to use.
        """
        __message = ""
        if isinstance(message, list):
            for m in message:
                if isinstance(m, dict):
                    __message += " | ".join(f'<light-blue>{key}</>: {value}' for key, value in m.items()) + '\n'
                else:
                    __message += f'- <light-blue>{m}</>\n'
        elif isinstance(message, dict):
            __message = "".join(f'- <light-blue>{key}</>: {value}\n' for key, value in message.items())
        else:
            __message = str(message)
        self.opt(colors = True, depth = 1).log(level.upper(), __message.strip(), *args, **kwargs)

    def status(self, status: str, message: Any, *args, level: str = 'info', **kwargs):
        """
        Log a message prefixed with a coloured status tag, e.g. `[rejected] 1997-03-14 ...`
        """
        color = STATUS_COLOR.get(status, FALLBACK_STATUS_COLOR)
        msg = str(message).replace('<', r'\<')
        self.opt(colors = True, depth = 1).log(level.upper(), f'<{color}>[{status}]</> {msg}', *args, **kwargs)


# < 0.7.0
try:
    logger = Logger(
        core=_Core(),
        exception=None,
        depth=0,
        record=False,
        lazy=False,
        colors=False,
        raw=False,
        capture=True,
        patcher=None,
        extra={},
    )
# >= 0.7.0
except Exception as e:
    logger = Logger(
        core=_Core(),
        exception=None,
        depth=0,
        record=False,
        lazy=False,
        colors=False,
        raw=False,
        capture=True,
        patchers=[],
        extra={},
    )

if _defaults.LOGURU_AUTOINIT and sys.stderr:
    logger.add(sys.stderr)

_atexit.register(logger.remove)

class InterceptHandler(logging.Handler):
    loglevel_mapping = {
        50: 'CRITICAL',
        40: 'ERROR',
        30: 'WARNING',
        20: 'INFO',
        10: 'DEBUG',
        0: 'NOTSET',
    }

    def emit(self, record):
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = self.loglevel_mapping.get(record.levelno, 'INFO')
        frame, depth = logging.currentframe(), 2
        while frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1
        logger.opt(
            depth=depth,
            exception=record.exc_info
        ).log(level, record.getMessage())


class CustomizeLogger:

    @classmethod
    def make_default_logger(cls, level: str = None):
        if level is None:
            from serialvol.utils.configs import get_serialvol_settings
            level = get_serialvol_settings().log_level or 'INFO'
        logger.remove()
        logger.add(
            sys.stderr,
            backtrace=True,
            colorize=True,
            level=level.upper(),
            format=cls.logger_formatter,
        )
        logging.basicConfig(handlers=[InterceptHandler()], level=0)
        *options, extra = logger._options
        return Logger(logger._core, *options, {**extra})

    @staticmethod
    def logger_formatter(record: dict) -> str:
        """
        Formats `LEVEL time name:function: message`.

        Anything set with `logger.contextualize(date=..., q=...)` is appended in brackets so
        per-day messages can be grepped out of a long pipeline run.
        """
        extra = '<cyan>{name}</>:<cyan>{function}</>: '
        context = ''
        if record['extra'].get('date') is not None:
            context += ' [date={extra[date]}]'
        if record['extra'].get('q') is not None:
            context += ' [q={extra[q]}]'
        return "<level>{level: <8}</> <green>{time:YYYY-MM-DD HH:mm:ss.SSS}</>: "\
                   + extra + "<level>{message}</level>" + context + "\n"


get_logger = CustomizeLogger.make_default_logger
default_logger = CustomizeLogger.make_default_logger()
