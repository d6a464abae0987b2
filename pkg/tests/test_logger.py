from pathlib import Path

from pytest import raises

from dyadim import DyadimError, Logger
from dyadim._levels import Level, LevelDoesNotExistError, get_defaults
from dyadim._sink import SinkDoesNotExistError
from dyadim.colours import Style

from .conftest import DummySink, get_config, get_stringio_logger

# pylint: disable=protected-access


def test_creation() -> None:
    logger = Logger("TEST")
    assert logger.name == "TEST"
    assert not logger.context
    assert logger._shared.levels == get_defaults()
    assert not logger._shared.sinks
    assert logger._shared.next_id == 0


def test_repr() -> None:
    assert repr(Logger("TEST")) == "Logger(name='TEST')"


def test_log_without_sinks() -> None:
    logger = Logger("TEST")
    logger.info("nobody listens")

    with raises(LevelDoesNotExistError):
        logger.log("does-not-exist", "message")


def test_log() -> None:
    io, logger = get_stringio_logger(get_config(lambda record: record.message))
    logger.log("INFO", "test-log")
    assert io.getvalue() == "test-log"


def test_level_shortcuts() -> None:
    io, logger = get_stringio_logger(get_config(lambda r: f"{r.level.name}:{r.message};"))
    logger.debug("a")
    logger.info("b")
    logger.success("c")
    logger.warning("d")
    logger.error("e")
    assert io.getvalue() == "DEBUG:a;INFO:b;SUCCESS:c;WARNING:d;ERROR:e;"


def test_min_level_and_filter() -> None:
    io, logger = get_stringio_logger(get_config(lambda record: record.message))
    logger.remove(0)
    logger.add(io, min_level="WARNING", log_filter=lambda record: "skip" not in record.message)
    logger.info("too low")
    logger.error("skip this")
    logger.error("kept")
    assert io.getvalue().endswith("kept\n")
    assert "too low" not in io.getvalue()
    assert "skip this" not in io.getvalue()


def test_log_exception() -> None:
    io, logger = get_stringio_logger(get_config("%{msg}%"))

    try:
        raise ZeroDivisionError("division")
    except ZeroDivisionError as e:
        logger.exception(e, message="failed: %{error}%")

    written = io.getvalue()
    assert written.startswith("failed: division\n")
    assert "Traceback" in written
    assert "ZeroDivisionError" in written


def test_bind() -> None:
    io, logger = get_stringio_logger(get_config("%{command}% %{seed}% %{msg}%"))
    bound = logger.bind(command="entropy", seed=3)
    bound.info("started")
    assert io.getvalue() == "entropy 3 started\n"

    again = bound.bind(seed=4)
    again.info("again")
    assert io.getvalue().endswith("entropy 4 again\n")
    assert bound.context == {"command": "entropy", "seed": 3}
    assert again._shared is logger._shared


def test_catch() -> None:
    io, logger = get_stringio_logger(get_config("%{msg}%"))
    caught: list[BaseException] = []

    with logger.catch(message="caught %{error}%", on_error=caught.append):
        raise DyadimError("bad weights")

    assert io.getvalue() == "caught bad weights\n"
    assert isinstance(caught[0], DyadimError)

    with raises(KeyError):
        with logger.catch():
            raise KeyError("not caught")

    with raises(DyadimError):
        with logger.catch(reraise=True):
            raise DyadimError("logged then raised")
    assert io.getvalue().endswith("logged then raised\n")


def test_timed() -> None:
    io, logger = get_stringio_logger(get_config("%{msg}%"))
    with logger.timed("enumeration", level="INFO"):
        pass
    assert io.getvalue().startswith("enumeration took ")
    assert io.getvalue().endswith("s\n")


def test_add_remove() -> None:
    logger = Logger("TEST")
    written: list[str] = []
    first = logger.add(written.append, log_format="%{msg}%")
    second = logger.add(DummySink(lambda _: None, None, get_config("%{msg}%")))
    assert (first, second) == (0, 1)

    logger.info("one")
    logger.remove(first)
    logger.info("two")
    assert written == ["one\n"]

    with raises(SinkDoesNotExistError):
        logger.remove(first)
    with raises(LevelDoesNotExistError):
        logger.add(written.append, min_level="does-not-exist")


def test_add_path(tmp_path: Path) -> None:
    logger = Logger("TEST")
    target = tmp_path / "nested" / "run.log"
    sink_id = logger.add(target, log_format="%{lvl}% %{msg}%")
    logger.info("to file")
    logger.remove(sink_id)
    assert target.read_text(encoding="utf-8") == "INFO to file\n"


def test_add_level() -> None:
    io, logger = get_stringio_logger(get_config(lambda r: f"{r.level.severity}"))
    level = logger.add_level("NOTICE", 25, [Style.MAGENTA])
    assert level == Level("NOTICE", 25, [Style.MAGENTA])
    logger.log("NOTICE", "message")
    logger.log(level, "message")
    assert io.getvalue() == "2525"
