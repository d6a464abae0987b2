"""
_export.py:

This file contains the writers of experiment artifacts. Data files are byte-reproducible:
`.` decimal separator, no thousands separators, LF line endings and floats written with 17
significant digits (or a fixed number of decimals for summaries).

Functions:
    - `format_float` - Render a float for an artifact.
    - `write_csv` - Write a header and rows to a CSV file.
    - `write_json` - Write a JSON document with sorted keys.
"""
from __future__ import annotations

import csv
import json
from math import isnan
from pathlib import Path
from typing import Iterable, Sequence

DATA_DIGITS = 17
SUMMARY_DECIMALS = 6


def format_float(value: float, decimals: int | None = None) -> str:
    """
    Render a float for an artifact.

    Parameters:
        - `value: float` - Value to render.
        - `decimals: int | None = None` - Fixed decimals, else 17 significant digits.

    Returns: `str` - The rendered value; infinities as `inf` / `-inf`, NaN as `nan`.
    """
    if isnan(value):
        return "nan"
    if value in (float("inf"), float("-inf")):
        return "inf" if value > 0 else "-inf"
    if decimals is not None:
        rendered = f"{value:.{decimals}f}"
        return "0." + "0" * decimals if rendered == "-0." + "0" * decimals else rendered
    return f"{value:.{DATA_DIGITS}g}"


def _cell(value: object, decimals: int | None) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value, decimals)
    return str(value)


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    *,
    decimals: int | None = None,
) -> Path:
    """
    Write a header and rows to a CSV file.

    Parameters:
        - `path: Path` - Destination, parents are created.
        - `header: Sequence[str]` - Column names.
        - `rows: Iterable[Sequence[object]]` - Rows; floats follow `format_float`, booleans are
                                               written `true` / `false`.
        - `decimals: int | None = None` - Fixed decimals for every float column.

    Returns: `Path` - The written path.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value, decimals) for value in row])
    return path


def write_json(path: Path, payload: object) -> Path:
    """
    Write a JSON document with sorted keys, two-space indentation and a final newline.

    Parameters:
        - `path: Path` - Destination, parents are created.
        - `payload: object` - JSON-serializable document.

    Returns: `Path` - The written path.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as file:
        json.dump(payload, file, indent=2, sort_keys=True, allow_nan=True)
        file.write("\n")
    return path
