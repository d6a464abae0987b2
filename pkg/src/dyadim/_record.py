"""
_record.py:

This file contains the `Record` class produced for every log call.

Classes:
    - `Record` - Runtime information collected by the run logger.
"""
from dataclasses import dataclass
from datetime import datetime
from typing import Mapping

from ._levels import Level


@dataclass(slots=True, frozen=True)
class Record:
    """
    Runtime information collected by the run logger.

    Attributes:
        - `logger_name: str` - Name of the logger which produced the record.
        - `level: Level` - Severity of the log.
        - `date_time: datetime` - Wall-clock time of the log.
        - `elapsed: float` - Seconds since the logger was created.
        - `message: str` - The log message.
        - `context: Mapping[str, object]` - Experiment context bound to the logger.
        - `exception: BaseException | None` - Optional exception to print after the message.
    """

    logger_name: str
    level: Level
    date_time: datetime
    elapsed: float
    message: str
    context: Mapping[str, object]
    exception: BaseException | None
