"""
_logger.py:

This file contains the `Logger` class which manages the creation and dispatch of run logs.

Classes:
    - `Logger` - Creates records and dispatches them to its sinks.
"""
from __future__ import annotations

from contextlib import contextmanager
from datetime import datetime
from os import PathLike
from pathlib import Path
from time import perf_counter
from types import MappingProxyType
from typing import TYPE_CHECKING, Callable, Iterable, Iterator, Mapping

from ._catcher import Catcher
from ._config import Config, DyadimError
from ._levels import Level, LevelDoesNotExistError, get_defaults
from ._record import Record
from ._sink import Sink, SinkDoesNotExistError, StreamSink
from .colours import Style, should_colourise, should_wrap, wrap

if TYPE_CHECKING:
    from _typeshed import StrPath, SupportsWrite


class _Shared:
    """Sinks, levels & start time shared by a logger and every logger bound from it."""

    __slots__ = "levels", "sinks", "next_id", "started"

    def __init__(self) -> None:
        self.levels = get_defaults()
        self.sinks: dict[int, Sink] = {}
        self.next_id = 0
        self.started = perf_counter()


class Logger:
    """
    Creates records and dispatches them to its sinks.

    Attributes:
        - `name: str` - Name of the logger.
        - `context: Mapping[str, object]` - Context attached to every record.

    Methods:
        - `log` - Write a log with a given level & message.
        - `debug`, `info`, `success`, `warning`, `error` - Shortcuts for the default levels.
        - `exception` - Log an exception with its traceback.
        - `bind` - Return a logger sharing the sinks but carrying more context.
        - `catch` - Context manager which logs the errors raised in its body.
        - `timed` - Context manager which logs the wall time of its body.
        - `add` - Add a sink, returns its id.
        - `remove` - Remove a sink by its id.
        - `add_level` - Create and register a new level.
    """

    __slots__ = "name", "context", "_shared"

    def __init__(
        self,
        name: str,
        context: Mapping[str, object] | None = None,
        *,
        _shared: _Shared | None = None,
    ) -> None:
        self.name = name
        self.context: Mapping[str, object] = MappingProxyType(dict(context or {}))
        self._shared = _shared if _shared is not None else _Shared()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"

    def _resolve(self, level: str | Level) -> Level:
        if isinstance(level, Level):
            return level
        found = self._shared.levels.get(level)
        if found is None:
            raise LevelDoesNotExistError(f"level {level!r} does not exist")
        return found

    def log(
        self, level: str | Level, message: object, exception: BaseException | None = None
    ) -> None:
        """
        Write a log with a given level & message.

        Parameters:
            - `level: str | Level` - Name of an existing level or a `Level` object.
            - `message: object` - Message, converted with `str`.
            - `exception: BaseException | None = None` - Exception printed after the message.

        Raises:
            - `LevelDoesNotExistError` - Raised if a string level does not exist.
        """
        resolved = self._resolve(level)
        if not self._shared.sinks:
            return

        record = Record(
            self.name,
            resolved,
            datetime.now(),
            perf_counter() - self._shared.started,
            str(message),
            self.context,
            exception,
        )

        for sink in tuple(self._shared.sinks.values()):
            if sink.accepts(record):
                sink.write(sink.format(record))

    def debug(self, message: object) -> None:
        """Write a log with the level `DEBUG`."""
        self.log("DEBUG", message)

    def info(self, message: object) -> None:
        """Write a log with the level `INFO`."""
        self.log("INFO", message)

    def success(self, message: object) -> None:
        """Write a log with the level `SUCCESS`."""
        self.log("SUCCESS", message)

    def warning(self, message: object) -> None:
        """Write a log with the level `WARNING`."""
        self.log("WARNING", message)

    def error(self, message: object) -> None:
        """Write a log with the level `ERROR`."""
        self.log("ERROR", message)

    def exception(
        self, exc: BaseException, message: object = "%{error}%", level: str | Level = "ERROR"
    ) -> None:
        """
        Log an exception together with its traceback.

        Parameters:
            - `exc: BaseException` - Exception to log.
            - `message: object = "%{error}%"` - Message, `%{error}%` expands to the exception.
            - `level: str | Level = "ERROR"` - Level of the log.
        """
        self.bind(error=exc).log(level, message, exc)

    def bind(self, **context: object) -> Logger:
        """
        Return a logger sharing this logger's sinks & levels with extra context. Context keys
        can be used as format specifiers, exg: `%{command}%`.

        Parameters:
            - `**context: object` - Context added to the current one.

        Returns: `Logger` - The bound logger.
        """
        return Logger(self.name, {**self.context, **context}, _shared=self._shared)

    def catch(
        self,
        exception: type[BaseException] | Iterable[type[BaseException]] = DyadimError,
        *,
        message: object = "%{error}%",
        level: str | Level = "ERROR",
        reraise: bool = False,
        with_traceback: bool = False,
        on_error: Callable[[BaseException], None] | None = None,
    ) -> Catcher:
        """
        Context manager which logs the errors raised in its body.

        Parameters:
            - `exception` - Exception type(s) which are caught, defaults to `DyadimError`.
            - `message: object = "%{error}%"` - Diagnostic, `%{error}%` expands to the error.
            - `level: str | Level = "ERROR"` - Level of the diagnostic.
            - `reraise: bool = False` - Whether caught errors propagate after being logged.
            - `with_traceback: bool = False` - Whether the traceback is logged as well.
            - `on_error` - Optional callback receiving the caught exception.

        Returns: `Catcher` - The context manager.
        """
        exc_types = (exception,) if isinstance(exception, type) else tuple(exception)
        return Catcher(self, message, level, exc_types, reraise, with_traceback, on_error)

    @contextmanager
    def timed(self, label: str, level: str | Level = "DEBUG") -> Iterator[None]:
        """
        Context manager which logs the wall time of its body.

        Parameters:
            - `label: str` - What the body does.
            - `level: str | Level = "DEBUG"` - Level of the log.
        """
        start = perf_counter()
        try:
            yield
        finally:
            self.log(level, f"{label} took {perf_counter() - start:.3f}s")

    def add(
        self,
        out: SupportsWrite[str] | Callable[[str], object] | StrPath | Sink,
        *,
        min_level: str | int | Level = 0,
        log_format: str | Callable[[Record], str] | Config = Config.DEFAULT_FORMAT,
        log_filter: Callable[[Record], bool] | None = None,
        colourise: bool = True,
        encoding: str = "utf-8",
    ) -> int:
        """
        Add a sink to the logger. Paths are opened in append mode and closed on removal.

        Format specifiers for log format strings (wrapped as `%{...}%`):
            - `name` - Name of the logger.
            - `lvl` - Level of the log.
            - `time` / `time:<strftime>` - Wall-clock time.
            - `elapsed` - Seconds since the logger was created.
            - `msg` - The message.
            - any key of the bound context, exg: `command`, `seed`.

        Parameters:
            - `out` - Stream, callable, path or ready-made `Sink`.
            - `min_level` - Minimum level written.
            - `log_format` - Format string, formatting function or complete `Config`.
            - `log_filter` - Predicate dropping records when it returns false.
            - `colourise` - Whether to colourise the output when the stream supports it.
            - `encoding` - Encoding of files opened from paths.

        Returns: `int` - Id of the sink.

        Raises:
            - `LevelDoesNotExistError` - Raised if a string `min_level` does not exist.
        """
        sink_id = self._shared.next_id
        self._shared.next_id += 1

        if isinstance(out, Sink):
            self._shared.sinks[sink_id] = out
            return sink_id

        on_remove: Callable[[], None] | None = None
        if isinstance(out, (str, PathLike)):
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            out = path.open("a", encoding=encoding)
            on_remove = out.close

        if isinstance(min_level, (str, Level)):
            min_level = self._resolve(min_level).severity

        if not isinstance(log_format, Config):
            log_format = Config(
                log_format, log_filter, colourise and should_colourise(out), min_level
            )

        self._shared.sinks[sink_id] = StreamSink(
            wrap(out) if should_wrap(out) else out, on_remove, log_format
        )
        return sink_id

    def remove(self, sink_id: int) -> None:
        """
        Close and remove a sink by its id.

        Parameters:
            - `sink_id: int` - Id returned by `add`.

        Raises:
            - `SinkDoesNotExistError` - Raised if no sink has the given id.
        """
        sink = self._shared.sinks.pop(sink_id, None)
        if sink is None:
            raise SinkDoesNotExistError(f"sink of id {sink_id!r} does not exist")
        if sink.close is not None:
            sink.close()

    def add_level(
        self, name: str, severity: int, colours: Iterable[Style] | None = None
    ) -> Level:
        """
        Create and register a new level.

        Parameters:
            - `name: str` - Name of the level.
            - `severity: int` - Severity of the level.
            - `colours: Iterable[Style] | None = None` - Terminal styles of the level.

        Returns: `Level` - The new level.
        """
        level = Level(name, severity, colours)
        self._shared.levels[name] = level
        return level


logger = Logger("dyadim")
