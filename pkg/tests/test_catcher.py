from pytest import raises

from dyadim import DyadimError, logger
from dyadim._catcher import Catcher
from dyadim._cli import ConfigError, exit_status
from dyadim._weights import WeightValueError

from .conftest import get_config, get_stringio_logger


def test_catch_defaults() -> None:
    catcher = logger.catch()
    assert isinstance(catcher, Catcher)
    assert catcher.exc_types == (DyadimError,)
    assert catcher.message == "%{error}%"
    assert catcher.level == "ERROR"
    assert not catcher.reraise and not catcher.with_traceback
    assert catcher.on_error is None

    several = logger.catch([ConfigError, WeightValueError], level="WARNING")
    assert several.exc_types == (ConfigError, WeightValueError)
    assert several.level == "WARNING"


def test_no_error() -> None:
    io, test_logger = get_stringio_logger(get_config("%{msg}%"))
    with test_logger.catch() as entered:
        assert entered is None
    assert io.getvalue() == ""


def test_logs_and_swallows() -> None:
    io, test_logger = get_stringio_logger(get_config("%{lvl}%: %{msg}%"))
    with test_logger.catch():
        raise WeightValueError("p_3 = 1.5 is outside [0, 1]")
    with test_logger.catch(message="run failed (%{error}%)", level="WARNING"):
        raise ConfigError("unknown key", "colour", 4)

    assert io.getvalue().splitlines() == [
        "ERROR: p_3 = 1.5 is outside [0, 1]",
        "WARNING: run failed (unknown key (key 'colour', line 4))",
    ]


def test_other_errors_propagate() -> None:
    io, test_logger = get_stringio_logger(get_config("%{msg}%"))
    with raises(ZeroDivisionError):
        with test_logger.catch():
            _ = 1 / 0
    with raises(KeyboardInterrupt):
        with test_logger.catch(Exception):
            raise KeyboardInterrupt
    assert io.getvalue() == ""


def test_reraise() -> None:
    io, test_logger = get_stringio_logger(get_config("%{msg}%"))
    with raises(ConfigError):
        with test_logger.catch(reraise=True):
            raise ConfigError("bad horizon")
    assert io.getvalue() == "bad horizon\n"


def test_on_error_sets_exit_status() -> None:
    _, test_logger = get_stringio_logger(get_config("%{msg}%"))
    statuses: list[int] = []

    for error in (ConfigError("bad"), WeightValueError("weight"), DyadimError("other")):
        with test_logger.catch(on_error=lambda exc: statuses.append(exit_status(exc))):
            raise error

    assert statuses == [2, 1, 1]


def test_with_traceback() -> None:
    io, test_logger = get_stringio_logger(get_config("%{msg}%"))
    with test_logger.catch(ValueError, with_traceback=True):
        raise ValueError("shown with its traceback")
    assert io.getvalue().startswith("shown with its traceback\nTraceback")
