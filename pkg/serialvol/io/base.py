import io
import csv as _csv
import pandas as pd

from typing import Any, Iterator, List, Optional, Sequence, Tuple
from serialvol.utils.configs import settings
from serialvol.utils.helpers import atomic_write_text, provenance_header, read_text
from serialvol.lib.exceptions import EmptyInput, ParseError


class BasePack:
    """
    A codec for one file format: `dumps`/`loads` work on text,
    `dump`/`load` on paths. Written files start with the provenance header.
    """
    header: Tuple[str, ...] = ()

    @classmethod
    def dumps(cls, obj, *args, **kwargs) -> str:
        raise NotImplementedError

    @classmethod
    def loads(cls, text: str, *args, path: Optional[str] = None, **kwargs):
        raise NotImplementedError

    @classmethod
    def dump(cls, obj, path: str, *args, config_hash: Optional[str] = None, **kwargs) -> str:
        text = provenance_header(config_hash) + '\n' + cls.dumps(obj, *args, **kwargs)
        return atomic_write_text(path, text)

    @classmethod
    def load(cls, path: str, *args, **kwargs):
        try:
            text = read_text(path)
        except (FileNotFoundError, OSError) as e:
            raise EmptyInput(f'cannot read input: {e}', path = path) from e
        return cls.loads(text, *args, path = path, **kwargs)

    @classmethod
    def read_frame(cls, path: str) -> pd.DataFrame:
        """
        Reads a written file back into a DataFrame, skipping the header comment
        """
        return pd.read_csv(io.StringIO(read_text(path)), comment = '#')

    """
    Helpers shared by the codecs
    """

    @staticmethod
    def fmt(value: Any) -> str:
        if isinstance(value, bool) or value is None: return str(value)
        if isinstance(value, int): return str(value)
        if isinstance(value, float): return settings.float_format % value
        return str(value)

    @classmethod
    def write_rows(cls, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = _csv.writer(buffer, lineterminator = '\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([cls.fmt(v) for v in row])
        return buffer.getvalue()

    @staticmethod
    def iter_rows(text: str, path: Optional[str] = None) -> Iterator[Tuple[int, List[str]]]:
        """
        Yields (1-based line number, fields) for every non-blank, non-comment line
        """
        for lineno, line in enumerate(text.splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'): continue
            try:
                fields = next(_csv.reader([line]))
            except _csv.Error as e:
                raise ParseError(str(e), path = path, line = lineno) from e
            yield lineno, [f.strip() for f in fields]

    @classmethod
    def read_header(cls, rows: Iterator[Tuple[int, List[str]]], path: Optional[str] = None) -> Tuple[int, List[str]]:
        try:
            return next(rows)
        except StopIteration:
            raise EmptyInput('file holds no header and no records', path = path) from None

    @staticmethod
    def parse_float(value: str, path: Optional[str], line: int, column: str) -> float:
        try:
            return float(value)
        except ValueError:
            raise ParseError(f'column {column}: cannot parse {value!r} as a number', path = path, line = line) from None
