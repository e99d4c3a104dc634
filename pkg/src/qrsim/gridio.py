"""CSV and metadata serialization of sweep grids.

Layout per observable CSV: comment lines carrying axis names/units, then a
body whose first row holds the axis2 values (a single ``value`` column for 1D
grids) and whose first column holds the axis1 values.  Cells use 9 significant
digits; points that did not converge or failed are left empty and enumerated
in the JSON metadata sidecar.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ConfigError
from .sweep import GridResult, STATUS_OK, STATUS_TRUNCATION


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def write_grid_csv(result: GridResult, out_dir: str, stem: str) -> dict[str, str]:
    """Write one CSV per observable plus a metadata sidecar; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    n1, n2 = result.shape
    emit_cell = np.isin(result.status, (STATUS_OK, STATUS_TRUNCATION))

    paths: dict[str, str] = {}
    for name, grid in result.values.items():
        path = os.path.join(out_dir, f"{stem}_{name}.csv")
        with open(path, "w") as fh:
            fh.write(f"# observable: {name}\n")
            fh.write(f"# axis1: {result.axis1_name} ({result.axis1_unit})\n")
            if result.axis2_name:
                fh.write(f"# axis2: {result.axis2_name} ({result.axis2_unit})\n")
            else:
                fh.write("# axis2: none\n")
            if result.axis2_values is not None:
                header = [""] + [_fmt(v) for v in result.axis2_values]
            else:
                header = ["", "value"]
            fh.write(",".join(header) + "\n")
            for i in range(n1):
                row = [_fmt(result.axis1_values[i])]
                for j in range(n2):
                    row.append(_fmt(grid[i, j]) if emit_cell[i, j] else "")
                fh.write(",".join(row) + "\n")
        paths[name] = path

    meta = {
        "axis1": {
            "name": result.axis1_name,
            "unit": result.axis1_unit,
            "values": [float(v) for v in result.axis1_values],
        },
        "axis2": None if result.axis2_values is None else {
            "name": result.axis2_name,
            "unit": result.axis2_unit,
            "values": [float(v) for v in result.axis2_values],
        },
        "observables": sorted(result.values),
        "status": [[str(s) for s in row] for row in result.status],
        "empty_cells": [
            [int(i), int(j)]
            for i in range(n1) for j in range(n2) if not emit_cell[i, j]
        ],
        "csv_files": {k: os.path.basename(v) for k, v in paths.items()},
        "provenance": result.provenance,
    }
    meta_path = os.path.join(out_dir, f"{stem}_meta.json")
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, default=str)
    paths["metadata"] = meta_path
    return paths


def read_grid_csv(path: str):
    """Parse a grid CSV back into (axis1, axis2, cells, header_info).

    ``axis2`` is None for 1D grids; empty cells come back as NaN.  Used for
    round-trip checks; the plotting package carries its own parser for the
    same contract.
    """
    info: dict[str, str] = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                info[key.strip()] = value.strip()
            elif line:
                rows.append(line.split(","))
    if not rows:
        raise ConfigError(f"{path}: no CSV body found")
    header, body = rows[0], rows[1:]
    if header[1:] == ["value"]:
        axis2 = None
    else:
        axis2 = np.array([float(v) for v in header[1:]])
    axis1 = np.array([float(r[0]) for r in body])
    cells = np.full((len(body), len(header) - 1), np.nan)
    for i, r in enumerate(body):
        for j, cell in enumerate(r[1:]):
            if cell != "":
                cells[i, j] = float(cell)
    return axis1, axis2, cells, info
