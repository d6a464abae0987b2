from enum import Enum
from io import StringIO

from dyadim.colours import Style, paint, should_colourise, should_wrap


def test_enum() -> None:
    assert issubclass(Style, Enum)
    for style in Style:
        assert isinstance(style.value, int)


def test_paint() -> None:
    assert paint("text", Style.RED) == "\033[31mtext\033[0m"
    assert paint("text", Style.RED, Style.BOLD) == "\033[31m\033[1mtext\033[0m"
    assert paint("text", Style.GREEN, end=None) == "\033[32mtext"
    assert paint("text") == "text\033[0m"


def test_should_colourise() -> None:
    assert not should_colourise(StringIO())
    assert not should_colourise(object())

    class Terminal(StringIO):
        def isatty(self) -> bool:
            return True

    assert should_colourise(Terminal())


def test_should_wrap() -> None:
    assert not should_wrap(StringIO())
    assert not should_wrap(lambda _: None)
