"""
colours:

ANSI styling for the run logger's terminal output.

Enums:
    - `Style` - ANSI select-graphic-rendition codes used by the default levels.

Functions:
    - `paint` - Wrap a string in ANSI styles, resetting at the end.
    - `should_colourise` - Whether a stream should receive ANSI sequences.
    - `should_wrap` - Whether a stream needs colorama's Win32 conversion.
    - `wrap` - Wrap a stream in colorama's Win32 converter.
"""
import os
import sys
from enum import Enum
from typing import TextIO, TypeGuard

from colorama.ansitowin32 import AnsiToWin32, StreamWrapper
from colorama.win32 import winapi_test


class Style(Enum):
    """ANSI select-graphic-rendition codes."""

    RESET = 0
    BOLD = 1
    DIM = 2
    RED = 31
    GREEN = 32
    YELLOW = 33
    BLUE = 34
    MAGENTA = 35
    CYAN = 36
    LIGHT_RED = 91
    LIGHT_GREEN = 92
    LIGHT_YELLOW = 93


def paint(string: str, *styles: Style, end: Style | None = Style.RESET) -> str:
    """
    Wrap a string in ANSI styles.

    Parameters:
        - `string: str` - Text to style.
        - `*styles: Style` - Styles applied before the text.
        - `end: Style | None = Style.RESET` - Style appended after the text, `None` for none.

    Returns: `str` - The styled string.
    """
    prefix = "".join(f"\033[{style.value}m" for style in styles)
    if end is None:
        return prefix + string
    return f"{prefix}{string}\033[{end.value}m"


def should_colourise(stream: object) -> bool:
    """
    Whether a stream should receive ANSI sequences: terminals, and the standard streams when
    running inside PyCharm or a Windows terminal emulator.

    Parameters:
        - `stream: object` - Stream to check.

    Returns: `bool` - True if the stream should be coloured.
    """
    if stream in (sys.__stdout__, sys.__stderr__) and (
        "PYCHARM_HOSTED" in os.environ
        or (sys.platform == "win32" and "TERM" in os.environ)
    ):
        return True

    try:
        return bool(stream.isatty())  # type: ignore[attr-defined]
    except Exception:  # pylint: disable=broad-exception-caught
        return False


def should_wrap(stream: object) -> TypeGuard[TextIO]:
    """
    Whether a stream needs colorama's Win32 conversion. Only standard streams on a Windows
    console qualify.

    Parameters:
        - `stream: object` - Stream to check.

    Returns: `TypeGuard[TextIO]` - True if the stream should be wrapped.
    """
    # colorama-stubs types `winapi_test` differently per platform, hence `sys.platform`.
    if sys.platform == "win32" and stream in (sys.__stdout__, sys.__stderr__):
        return winapi_test()
    return False


def wrap(stream: TextIO) -> StreamWrapper:
    """
    Wrap a stream in colorama's Win32 converter.

    Parameters:
        - `stream: TextIO` - Stream to wrap.

    Returns: `StreamWrapper` - The wrapped stream.
    """
    return AnsiToWin32(stream, convert=True, strip=False, autoreset=False).stream
