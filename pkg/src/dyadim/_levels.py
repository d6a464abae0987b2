"""
_levels.py:

This file contains the severity levels understood by the run logger.

Classes:
    - `LevelDoesNotExistError` - Error raised when looking up a level which does not exist.
    - `Level` - Named severity with optional terminal colours.

Functions:
    - `get_defaults` - Return a fresh mapping of the default levels.
"""
from dataclasses import dataclass, field
from typing import Iterable

from ._config import DyadimError
from .colours import Style


class LevelDoesNotExistError(DyadimError):
    """
    This class should be used to raise an error
    when looking up a level which does not exist.
    """


@dataclass(slots=True, frozen=True)
class Level:
    """
    Named severity with optional terminal colours.

    Attributes:
        - `name: str` - Name of the level, used to look it up.
        - `severity: int` - Records below a sink's minimum severity are dropped.
        - `colours: Iterable[Style] | None = None` - Styles applied on colour terminals.
    """

    name: str
    severity: int
    colours: Iterable[Style] | None = field(default=None)


def get_defaults() -> dict[str, Level]:
    """
    Return a fresh mapping of the default levels.

    Default Levels:
        - 10 : DEBUG
        - 20 : INFO
        - 30 : SUCCESS
        - 40 : WARNING
        - 50 : ERROR

    Returns: `dict[str, Level]` - Level name to `Level`.
    """
    return {
        "DEBUG": Level("DEBUG", 10, (Style.BLUE,)),
        "INFO": Level("INFO", 20, (Style.CYAN,)),
        "SUCCESS": Level("SUCCESS", 30, (Style.LIGHT_GREEN,)),
        "WARNING": Level("WARNING", 40, (Style.LIGHT_YELLOW,)),
        "ERROR": Level("ERROR", 50, (Style.LIGHT_RED, Style.BOLD)),
    }
