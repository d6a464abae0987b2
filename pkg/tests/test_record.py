from datetime import datetime

from dyadim._levels import Level
from dyadim._record import Record


def test_record_creation() -> None:
    logger_name = "record"
    level = Level("level", 0)
    date_time = datetime.now()
    message = "message"
    context = {"command": "entropy", "seed": 7}

    try:
        raise ValueError("boom")
    except ValueError as e:
        exception = e

    record = Record(logger_name, level, date_time, 1.5, message, context, exception)

    assert record.logger_name is logger_name
    assert record.level is level
    assert record.date_time is date_time
    assert record.elapsed == 1.5
    assert record.message is message
    assert record.context is context
    assert record.exception is exception  # pylint: disable=used-before-assignment
