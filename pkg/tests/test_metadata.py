from re import fullmatch

import dyadim


def test_version() -> None:
    assert fullmatch(r"\d+\.\d+\.\d+", dyadim.__version__)


def test_all() -> None:
    for name in dyadim.__all__:
        assert hasattr(dyadim, name)

    assert "logger" in dyadim.__all__
    assert "Logger" in dyadim.__all__
    assert "DyadimError" in dyadim.__all__
    assert "WeightSequence" in dyadim.__all__
    assert "MarkovMeasure" in dyadim.__all__
    assert "entropy_profile" in dyadim.__all__
    assert "dimension_estimate" in dyadim.__all__
    assert "build_pair" in dyadim.__all__
    for helper in ("binary_entropy", "step_entropy", "smb_concentration", "construction_epsilon"):
        assert helper in dyadim.__all__
    assert "main" in dyadim.__all__
    assert "colours" in dyadim.__all__


def test_default_sink() -> None:
    # pylint: disable=protected-access
    assert len(dyadim.logger._shared.sinks) >= 1
