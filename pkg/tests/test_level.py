from dyadim._config import DyadimError
from dyadim._levels import Level, LevelDoesNotExistError, get_defaults
from dyadim.colours import Style


def test_level_creation() -> None:
    opts = "TEST", 10, (Style.BLUE, Style.BOLD)
    level = Level(*opts)
    assert level.name == opts[0]
    assert level.severity == opts[1]
    assert level.colours == opts[2]


def test_level_does_not_exist_error() -> None:
    assert issubclass(LevelDoesNotExistError, DyadimError)


def test_defaults() -> None:
    defaults = get_defaults()

    for name, level in defaults.items():
        assert name == level.name

    severities = [level.severity for level in defaults.values()]
    assert severities == sorted(severities)
    assert list(defaults) == ["DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR"]


def test_defaults_are_fresh() -> None:
    first = get_defaults()
    first.pop("DEBUG")
    assert "DEBUG" in get_defaults()
