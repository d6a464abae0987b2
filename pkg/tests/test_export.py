import json
from pathlib import Path

from dyadim._export import format_float, write_csv, write_json


def test_format_float() -> None:
    assert format_float(float("nan")) == "nan"
    assert format_float(float("inf")) == "inf"
    assert format_float(float("-inf")) == "-inf"
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1"
    assert format_float(1e22) == "1e+22"
    assert format_float(0.8812908992306927, 6) == "0.881291"
    assert format_float(-1e-9, 6) == "0.000000"
    assert format_float(-0.5, 6) == "-0.500000"
    assert format_float(float("nan"), 6) == "nan"


def test_write_csv(tmp_path: Path) -> None:
    path = write_csv(
        tmp_path / "nested" / "table.csv",
        ["n", "value", "ok", "label"],
        [[1, 0.25, True, "regime0:symbol0"], [2, float("inf"), False, "a,b"]],
    )
    assert path.read_bytes() == (
        b"n,value,ok,label\n1,0.25,true,regime0:symbol0\n2,inf,false,\"a,b\"\n"
    )
    fixed = write_csv(tmp_path / "fixed.csv", ["x"], [[1 / 3], [-0.0]], decimals=6)
    assert fixed.read_text(encoding="utf-8") == "x\n0.333333\n0.000000\n"


def test_write_json(tmp_path: Path) -> None:
    path = write_json(tmp_path / "doc.json", {"b": [1, 2], "a": {"d": 0.5, "c": True}})
    text = path.read_text(encoding="utf-8")
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert text.index('"c"') < text.index('"d"')
    assert json.loads(text) == {"a": {"c": True, "d": 0.5}, "b": [1, 2]}
