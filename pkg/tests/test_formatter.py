from datetime import datetime

from pytest import raises

from dyadim._config import Config
from dyadim._formatter import InvalidFormatSpecifierError, format_record
from dyadim._levels import Level
from dyadim._record import Record
from dyadim.colours import Style

from .conftest import get_config


def make_record(message: str = "hello", exception: BaseException | None = None) -> Record:
    return Record(
        "TEST",
        Level("INFO", 20, (Style.CYAN,)),
        datetime(2024, 5, 6, 7, 8, 9),
        1.23456,
        message,
        {"command": "sample", "seed": 11},
        exception,
    )


def test_builtin_specifiers() -> None:
    record = make_record()
    assert format_record(record, get_config("%{name}%|%{lvl}%|%{msg}%")) == "TEST|INFO|hello\n"
    assert format_record(record, get_config("%{logger-name}% %{level}% %{message}%")) == (
        "TEST INFO hello\n"
    )
    assert format_record(record, get_config("%{time}%")) == "2024-05-06 07:08:09\n"
    assert format_record(record, get_config("%{time:%H.%M}%")) == "07.08\n"
    assert format_record(record, get_config("+%{elapsed}%s")) == "+1.235s\n"


def test_context_specifiers() -> None:
    record = make_record("seed %{seed}% in %{missing}%")
    assert format_record(record, get_config("[%{command}%] %{msg}%")) == (
        "[sample] seed 11 in %{missing}%\n"
    )


def test_invalid_specifier() -> None:
    with raises(InvalidFormatSpecifierError):
        format_record(make_record(), get_config("%{does-not-exist}%"))


def test_exception() -> None:
    try:
        raise RuntimeError("broken")
    except RuntimeError as e:
        written = format_record(make_record(exception=e), get_config("%{msg}%"))

    first, *rest = written.splitlines()
    assert first == "hello"
    assert rest[0].startswith("Traceback")
    assert rest[-1] == "RuntimeError: broken"


def test_colourise() -> None:
    config = Config("%{msg}%", None, True, 0)
    assert format_record(make_record(), config) == "\033[36mhello\n\033[0m"
