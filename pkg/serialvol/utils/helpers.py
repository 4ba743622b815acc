import json
import time
import uuid
import typing
import hashlib
import functools

from serialvol.version import VERSION
from serialvol.utils.logs import default_logger


def timer(t: typing.Optional[float] = None, msg: typing.Optional[str] = None, logger = default_logger):
    """
    Call without args to start, then with the start time to log the elapsed time
    """
    if not t: return time.perf_counter()
    done_time = time.perf_counter() - t
    if msg: logger.info(f'{msg} in {done_time:.2f} secs')
    return done_time


def timed(func: typing.Callable):
    """
    Decorator to time a function at debug level
    """
    _func_name = func.__name__
    @functools.wraps(func)
    def fx(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        default_logger.debug(f'{_func_name}: {time.perf_counter() - start:.4f} secs')
        return result
    return fx


def hash_config(values: typing.Dict[str, typing.Any]) -> str:
    """
    First 12 hex digits of the sha256 of the canonical JSON form of `values`
    """
    blob = json.dumps(values, sort_keys = True, default = str, separators = (',', ':'))
    return hashlib.sha256(blob.encode('utf-8')).hexdigest()[:12]


def provenance_header(config_hash: typing.Optional[str] = None) -> str:
    header = f'# serialvol {VERSION}'
    if config_hash: header += f' config={config_hash}'
    return header


def atomic_write_text(path: str, text: str, encoding: str = 'utf-8') -> str:
    """
    Writes `text` to a sibling temp file and moves it over `path`,
    so a failed run never leaves a half-written output behind.
    """
    from fsspec.core import url_to_fs
    fs, fs_path = url_to_fs(path)
    parent = fs._parent(fs_path)
    if parent: fs.makedirs(parent, exist_ok = True)
    tmp_path = f'{fs_path}.{uuid.uuid4().hex[:8]}.tmp'
    try:
        with fs.open(tmp_path, 'w', encoding = encoding) as f:
            f.write(text)
        if fs.exists(fs_path): fs.rm(fs_path)
        fs.mv(tmp_path, fs_path)
    except Exception:
        if fs.exists(tmp_path): fs.rm(tmp_path)
        raise
    return path


def read_text(path: str, encoding: str = 'utf-8') -> str:
    import fsspec
    with fsspec.open(path, 'r', encoding = encoding) as f:
        return f.read()
