"""
_config.py:

This file contains the package-wide settings and the per-sink logging configuration.

Classes:
    - `DyadimError` - Base class of every error raised by this package.
    - `Settings` - Package-wide numeric defaults and environment lookups.
    - `Config` - Class used for storing the configuration of a logging sink.
"""
from __future__ import annotations

from dataclasses import dataclass
from os import cpu_count, environ
from re import compile as compile_re
from typing import TYPE_CHECKING, Callable, ClassVar, final

if TYPE_CHECKING:
    from ._record import Record


class DyadimError(Exception):
    """
    Base class from which every error raised by this package inherits, so that callers can
    catch all of them in a single clause.
    """


@final
class Settings:
    """
    Package-wide settings. To change them for a session, assign to the class variables
    before running any experiment.

    Class Variables:
        - `DEFAULT_HORIZON` - Number of generations used by entropy profiles & estimates.
        - `DEFAULT_WINDOW` - Trailing window used as the liminf/limsup surrogate.
        - `DEFAULT_PATHS` - Number of Monte Carlo paths.
        - `DEFAULT_DEPTH` - Depth of sampled paths.
        - `DEFAULT_SEED` - Master seed.
        - `DEFAULT_CHECKPOINTS` - Generations at which sampled exponents are compared.
        - `BRUTEFORCE_LIMIT` - Largest generation that may be enumerated cylinder by cylinder.
        - `BRUTEFORCE_SPLIT_FROM` - Generation from which enumeration is split by prefix.
        - `BRUTEFORCE_PREFIX_BITS` - Length of the prefixes used to split enumeration.
        - `COMPENSATED_FROM` - Horizon above which entropy sums use compensated summation.
        - `PATH_BATCH` - Number of paths walked together by one worker.
        - `SAMPLE_CHUNK` - Number of uniforms drawn at once from each path's stream.
        - `THREADS_ENV` - Environment variable capping the number of worker threads.
    """

    DEFAULT_HORIZON: ClassVar[int] = 10_000
    DEFAULT_WINDOW: ClassVar[int] = 1_000
    DEFAULT_PATHS: ClassVar[int] = 200
    DEFAULT_DEPTH: ClassVar[int] = 10_000
    DEFAULT_SEED: ClassVar[int] = 0
    DEFAULT_CHECKPOINTS: ClassVar[tuple[int, ...]] = (100, 1_000, 10_000)
    BRUTEFORCE_LIMIT: ClassVar[int] = 22
    BRUTEFORCE_SPLIT_FROM: ClassVar[int] = 16
    BRUTEFORCE_PREFIX_BITS: ClassVar[int] = 4
    COMPENSATED_FROM: ClassVar[int] = 10_000
    PATH_BATCH: ClassVar[int] = 64
    SAMPLE_CHUNK: ClassVar[int] = 4_096
    THREADS_ENV: ClassVar[str] = "DYADIM_THREADS"

    @classmethod
    def max_workers(cls) -> int:
        """
        Number of worker threads the package may use.

        Returns: `int` - The value of `DYADIM_THREADS` if it is a positive integer, otherwise
                         the number of CPUs.
        """
        raw = environ.get(cls.THREADS_ENV, "").strip()
        if raw.isdigit() and int(raw) > 0:
            return int(raw)
        return cpu_count() or 1


@final
@dataclass(slots=True, frozen=True)
class Config:
    """
    Class used for storing the configuration of one logging sink.

    Class Variables:
        - `FORMAT_PARSER` - Compiled regular expression used for parsing format strings.
        - `DEFAULT_FORMAT` - Default format string for logs.
        - `DEFAULT_TIME` - Default `strftime` format for the `time` specifier.

    Attributes:
        - `formatter` - Either a function which takes in a record and returns the formatted
                        string or a format string which is populated at runtime.
        - `filter_func` - Optional predicate, returning false drops the record for this sink.
        - `colourise` - Whether or not to colourise the output.
        - `min_level` - Minimum severity written by the sink.
    """

    FORMAT_PARSER: ClassVar = compile_re("%{.*?}%")
    DEFAULT_FORMAT: ClassVar = "[%{lvl}%][%{time}%][+%{elapsed}%s] %{msg}%"
    DEFAULT_TIME: ClassVar = "%Y-%m-%d %H:%M:%S"

    formatter: Callable[[Record], str] | str
    filter_func: Callable[[Record], bool] | None
    colourise: bool
    min_level: int
