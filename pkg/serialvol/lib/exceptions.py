from typing import Any, Optional


class SerialVolError(Exception):
    """
    Base class for every error raised by serialvol.
    """
    exit_code: int = 2

    def __init__(self, message: str = '', **context: Any):
        self.message = message or self.__class__.__name__
        self.context = {k: v for k, v in context.items() if v is not None}
        super().__init__(self.render())

    def render(self) -> str:
        if not self.context: return self.message
        ctx = ', '.join(f'{k}={v}' for k, v in self.context.items())
        return f'{self.message} [{ctx}]'

    def with_context(self, **context: Any) -> 'SerialVolError':
        """
        Returns the same error with extra context (date, q, ...) attached,
        so it can be re-raised further up the pipeline.
        """
        self.context.update({k: v for k, v in context.items() if v is not None})
        self.args = (self.render(),)
        return self

    @property
    def reason(self) -> str:
        return self.__class__.__name__


class ConfigError(SerialVolError):
    """
    Raised for invalid configuration or usage. CLI exit code 1.
    """
    exit_code: int = 1


class InvalidSpec(ConfigError):
    """
    Raised when a SimSpec, GridSpec or PipelineConfig violates its invariants.
    """
    pass


class DataError(SerialVolError):
    """
    Raised when input data cannot be processed. CLI exit code 2.
    """
    exit_code: int = 2


class EmptyInput(DataError):
    """
    Raised when an input (file, vector, series) holds no observations.
    """
    pass


class EmptyDay(DataError):
    """
    Raised when a tick series holds no records for the requested date.
    """
    pass


class NoPriceBeforeOpen(DataError):
    """
    Raised when no tick exists at or before the first grid instant of a session.
    """
    pass


class NonPositivePrice(DataError):
    pass


class NonFiniteReturn(DataError):
    pass


class UnsortedTimestamps(DataError):
    pass


class TooShort(DataError):
    """
    Raised when a vector is too short for the requested statistic.
    """
    pass


class SingularLambda(DataError):
    """
    Raised when the kernel is evaluated where sin(lambda / 2) = 0.
    """
    pass


class DegenerateDay(DataError):
    """
    Raised when a day's one-period variance is zero (constant price).
    """
    pass


class InsufficientHistory(DataError):
    pass


class RankDeficient(DataError):
    """
    Raised when a design matrix does not have full column rank.
    """
    pass


class TooFewRows(DataError):
    pass


class AlignmentError(DataError):
    """
    Raised when regression inputs do not share the required dates.
    """
    pass


class SeriesTooShort(DataError):
    """
    Raised when a series is shorter than the rolling window.
    """
    pass


class ParseError(DataError):
    """
    Raised when an input file cannot be parsed. Carries the path and 1-based line number.
    """

    def __init__(self, message: str = '', path: Optional[str] = None, line: Optional[int] = None, **context: Any):
        self.path = path
        self.line = line
        super().__init__(message, path = path, line = line, **context)
