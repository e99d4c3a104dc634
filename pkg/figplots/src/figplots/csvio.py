"""Parser for the sweep-grid CSV contract and its JSON metadata sidecar.

Contract: leading ``#`` comment lines carry ``observable``, ``axis1``, and
``axis2`` descriptors (``name (unit)`` or ``none``); the first body row holds
the axis2 values (a single ``value`` column for 1D grids); the first column
holds the axis1 values; empty cells mark points without a usable value.
The sidecar ``{stem}_meta.json`` sits next to the CSVs and carries axes,
statuses, and provenance.

This is an independent implementation of the contract: the plotting layer
talks to the simulator only through these files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np


class CsvFormatError(ValueError):
    """Malformed grid CSV; the message names the offending row/column."""


@dataclass
class GridData:
    path: str
    observable: str
    axis1_label: str            # "name (unit)" as written in the header
    axis2_label: str | None     # None for 1D grids
    axis1: np.ndarray
    axis2: np.ndarray | None
    cells: np.ma.MaskedArray    # shape (len(axis1), len(axis2) or 1); empty cells masked

    @property
    def is_1d(self) -> bool:
        return self.axis2 is None


def _float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise CsvFormatError(f"{where}: {text!r} is not a number") from None


def read_grid(path: str) -> GridData:
    info: dict[str, str] = {}
    rows: list[tuple[int, list[str]]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, sep, value = line[1:].partition(":")
                if sep:
                    info[key.strip()] = value.strip()
            elif line:
                rows.append((lineno, line.split(",")))

    if "observable" not in info or "axis1" not in info:
        raise CsvFormatError(f"{path}: missing observable/axis1 header comments")
    if not rows:
        raise CsvFormatError(f"{path}: no CSV body found")

    (header_line, header), body = rows[0], rows[1:]
    if len(header) < 2:
        raise CsvFormatError(f"{path}, row {header_line}: header needs a corner and values")
    if not body:
        raise CsvFormatError(f"{path}: header without data rows")

    if header[1:] == ["value"]:
        axis2 = None
    else:
        axis2 = np.array(
            [_float(v, f"{path}, row {header_line}, column {j + 2}")
             for j, v in enumerate(header[1:])]
        )

    width = len(header)
    axis1 = np.empty(len(body))
    values = np.full((len(body), width - 1), np.nan)
    mask = np.zeros_like(values, dtype=bool)
    for i, (lineno, row) in enumerate(body):
        if len(row) != width:
            raise CsvFormatError(
                f"{path}, row {lineno}: expected {width} columns, found {len(row)}"
            )
        axis1[i] = _float(row[0], f"{path}, row {lineno}, column 1")
        for j, cell in enumerate(row[1:]):
            if cell == "":
                mask[i, j] = True
            else:
                values[i, j] = _float(cell, f"{path}, row {lineno}, column {j + 2}")

    axis2_raw = info.get("axis2", "none")
    return GridData(
        path=path,
        observable=info["observable"],
        axis1_label=info["axis1"],
        axis2_label=None if axis2_raw == "none" else axis2_raw,
        axis1=axis1,
        axis2=axis2,
        cells=np.ma.MaskedArray(values, mask=mask),
    )


def sidecar_path(csv_path: str) -> str | None:
    """Find the metadata sidecar for ``{stem}_{observable}.csv``.

    Observable names may contain underscores, so every trailing-segment split
    of the file name is tried as a stem until ``{stem}_meta.json`` exists.
    """
    base = os.path.basename(csv_path)
    if not base.endswith(".csv"):
        return None
    parts = base[:-4].split("_")
    for n in range(len(parts) - 1, 0, -1):
        candidate = os.path.join(
            os.path.dirname(csv_path), "_".join(parts[:n]) + "_meta.json"
        )
        if os.path.exists(candidate):
            return candidate
    return None


def read_sidecar(csv_path: str) -> dict | None:
    path = sidecar_path(csv_path)
    if path is None:
        return None
    with open(path) as fh:
        return json.load(fh)
