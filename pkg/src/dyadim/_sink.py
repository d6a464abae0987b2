"""
_sink.py:

This file contains the destinations the run logger writes to.

Classes:
    - `SinkDoesNotExistError` - Error raised when accessing a sink id which does not exist.
    - `Sink` - Abstract base class from which all sinks inherit.
    - `StreamSink` - Blocking sink writing to a stream or a callable.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

from ._config import Config, DyadimError
from ._formatter import format_record
from ._record import Record

if TYPE_CHECKING:
    from _typeshed import SupportsWrite


class SinkDoesNotExistError(DyadimError):
    """
    This class should be used to raise an error
    when trying to access a sink which does not exist.
    """


@dataclass(slots=True, frozen=True)
class Sink(ABC):
    """
    Abstract base class from which all sinks inherit.

    Attributes:
        - `out: SupportsWrite[str] | Callable[[str], object]` - Destination of formatted logs.
        - `close: Callable[[], None] | None` - Called when the sink is removed.
        - `config: Config` - Formatting, filtering & colour settings of the sink.

    Abstract Methods:
        - `write(string: str) -> None` - Write a formatted string to `out`.
    """

    out: SupportsWrite[str] | Callable[[str], object]
    close: Callable[[], None] | None
    config: Config

    def accepts(self, record: Record) -> bool:
        """
        Whether the record passes the sink's minimum level and filter.

        Parameters:
            - `record: Record` - Candidate record.

        Returns: `bool` - True if the record should be written.
        """
        if record.level.severity < self.config.min_level:
            return False
        return self.config.filter_func is None or self.config.filter_func(record)

    def format(self, record: Record) -> str:
        """
        Format a record with the sink's formatter.

        Parameters:
            - `record: Record` - Record to format.

        Returns: `str` - Formatted string.
        """
        if callable(self.config.formatter):
            return self.config.formatter(record)
        return format_record(record, self.config)

    @abstractmethod
    def write(self, string: str) -> None:
        """
        Concrete implementations write the string to `out`.

        Parameters:
            - `string: str` - String to be written.
        """


class StreamSink(Sink):
    """Blocking sink writing directly to a stream or a callable."""

    __slots__ = ()

    def write(self, string: str) -> None:
        if callable(self.out):
            self.out(string)
            return
        self.out.write(string)
        flush = getattr(self.out, "flush", None)
        if callable(flush):
            flush()
