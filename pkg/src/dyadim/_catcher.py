"""
_catcher.py:

This file contains the context manager used for catching and logging errors.

Classes:
    - `Catcher` - `ContextManager[None]` which logs the errors raised in its body.
"""
from __future__ import annotations

from contextlib import AbstractContextManager
from dataclasses import dataclass
from types import TracebackType
from typing import TYPE_CHECKING, Callable

if TYPE_CHECKING:
    from ._levels import Level
    from ._logger import Logger


@dataclass(slots=True, frozen=True)
class Catcher(AbstractContextManager[None]):
    """
    `ContextManager[None]` used by `Logger.catch` to log errors raised in its body.

    Attributes:
        - `logger: Logger` - Logger receiving the diagnostic.
        - `message: object` - Diagnostic logged with the exception; `%{error}%` expands to
                              the exception's text.
        - `level: str | Level` - Level of the diagnostic.
        - `exc_types: tuple[type[BaseException], ...]` - Exception types which are caught.
        - `reraise: bool` - Whether caught exceptions propagate after being logged.
        - `with_traceback: bool` - Whether the traceback is written with the diagnostic.
        - `on_error: Callable[[BaseException], None] | None` - Called with the caught exception.
    """

    logger: Logger
    message: object
    level: str | Level
    exc_types: tuple[type[BaseException], ...]
    reraise: bool
    with_traceback: bool
    on_error: Callable[[BaseException], None] | None

    def __enter__(self) -> None:
        return None

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> bool | None:
        if exc_type is None or exc is None:
            return None

        if not issubclass(exc_type, self.exc_types):
            return False

        self.logger.bind(error=exc).log(
            self.level, self.message, exc if self.with_traceback else None
        )

        if self.on_error is not None:
            self.on_error(exc)

        return not self.reraise
