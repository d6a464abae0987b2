"""
_formatter.py:

This file contains the functions required to format `Record`s according to `Config`s.

Classes:
    - `InvalidFormatSpecifierError` - Error raised for an unknown `%{...}%` specifier.

Functions:
    - `format_record` - Get a string with the info from a record according to the config.
"""
from traceback import format_exception

from ._config import Config, DyadimError
from ._record import Record
from .colours import paint


class InvalidFormatSpecifierError(DyadimError):
    """
    This class should be used to raise an error when the parser
    encounters a format specifier which does not exist.
    """


def _expand(format_str: str, record: Record, *, _from_msg: bool = False) -> str:
    """
    Substitute every `%{...}%` specifier of the format string with the record's information.

    Parameters:
        - `format_str: str` - Format string.
        - `record: Record` - Record which contains the information to include.

    Returns: `str` - The expanded string.

    Raises:
        - `InvalidFormatSpecifierError` - Raised if a specifier is neither built in nor a key
                                          of the record's context.
    """
    last_end = 0
    pieces: list[str] = []
    for match in Config.FORMAT_PARSER.finditer(format_str):
        pieces.append(format_str[last_end : match.start()])
        last_end = match.end()
        token = match.group()[2:-2]  # "%{lvl}%" -> "lvl"

        if token in ("name", "logger-name"):
            pieces.append(record.logger_name)
        elif token in ("lvl", "level"):
            pieces.append(record.level.name)
        elif token == "time":
            pieces.append(record.date_time.strftime(Config.DEFAULT_TIME))
        elif token.startswith("time:"):
            pieces.append(record.date_time.strftime(token[5:]))
        elif token == "elapsed":
            pieces.append(f"{record.elapsed:.3f}")
        elif token in ("msg", "message"):
            # a message may itself reference context keys, but never expands twice
            pieces.append(
                record.message if _from_msg else _expand(record.message, record, _from_msg=True)
            )
        elif token in record.context:
            pieces.append(str(record.context[token]))
        elif _from_msg:
            pieces.append(match.group())
        else:
            raise InvalidFormatSpecifierError(f"Format specifier {match.group()!r} does not exist")

    pieces.append(format_str[last_end:])
    return "".join(pieces)


def format_record(record: Record, config: Config) -> str:
    """
    Create a logging string with the information from a record according to the config.

    Parameters:
        - `record: Record` - Record collected by the logger.
        - `config: Config` - Config whose format string dictates the layout.

    Returns: `str` - Formatted string ready for writing, newline terminated.

    Raises:
        - `InvalidFormatSpecifierError` - Raised for an unknown specifier.
    """
    assert isinstance(config.formatter, str)
    logging_string = _expand(config.formatter, record)

    if record.exception is not None:
        if logging_string:
            logging_string += "\n"
        logging_string += "".join(format_exception(record.exception))
    else:
        logging_string += "\n"

    if config.colourise and record.level.colours is not None:
        return paint(logging_string, *record.level.colours)

    return logging_string
