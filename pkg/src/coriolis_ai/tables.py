"""
CSV and JSON formats exchanged between simulation and analysis.

Shot table (schema version 1), one row per shot::

    parameter_value,shot_index,pop_a,pop_b,pop_c,pop_d,x,y

``parameter_value`` is SI (rad/s for mirror rates, s for the final-pulse
delay). Floats are written with ``repr`` so a table read back reproduces the
simulated values exactly.

Binned-contrast table::

    parameter_value,contrast,stderr,n_bins
"""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from .analysis import BinnedContrast
from .synth import ShotRecord

__all__ = [
    "SCHEMA_VERSION",
    "SHOT_COLUMNS",
    "BINNED_COLUMNS",
    "SchemaError",
    "write_shots_csv",
    "read_shots_csv",
    "write_binned_csv",
    "write_json",
]

SCHEMA_VERSION = 1
SHOT_COLUMNS = ("parameter_value", "shot_index", "pop_a", "pop_b", "pop_c", "pop_d", "x", "y")
BINNED_COLUMNS = ("parameter_value", "contrast", "stderr", "n_bins")


class SchemaError(ValueError):
    """A shot table does not follow the documented schema."""


def write_shots_csv(path, scan: Iterable[tuple[float, list[ShotRecord]]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SHOT_COLUMNS)
        for value, shots in scan:
            for j, s in enumerate(shots):
                w.writerow([repr(float(value)), j, repr(s.pop_a), repr(s.pop_b), repr(s.pop_c), repr(s.pop_d), repr(s.x), repr(s.y)])


def read_shots_csv(path) -> list[tuple[float, np.ndarray]]:
    """
    Read a shot table and group it by parameter value, in order of first appearance.

    Returns a list of (parameter value, (N, 2) array of x, y). Raises
    :class:`SchemaError` with the offending line number on malformed input.
    """
    groups: dict[float, list[tuple[float, float]]] = {}
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: line 1: empty file, expected header {','.join(SHOT_COLUMNS)}")
        header = [h.strip() for h in header]
        if tuple(header) != SHOT_COLUMNS:
            raise SchemaError(f"{path}: line 1: header {header} does not match {list(SHOT_COLUMNS)}")
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(SHOT_COLUMNS):
                raise SchemaError(f"{path}: line {line}: expected {len(SHOT_COLUMNS)} fields, got {len(row)}")
            try:
                value = float(row[0])
                int(row[1])
                pops = [float(v) for v in row[2:6]]
                x, y = float(row[6]), float(row[7])
            except ValueError as err:
                raise SchemaError(f"{path}: line {line}: {err}") from None
            if not all(math.isfinite(v) for v in (value, x, y, *pops)):
                raise SchemaError(f"{path}: line {line}: non-finite value")
            if not all(0.0 <= p <= 1.0 for p in pops):
                raise SchemaError(f"{path}: line {line}: populations must lie in [0, 1]")
            if not (-1.0 <= x <= 1.0 and -1.0 <= y <= 1.0):
                raise SchemaError(f"{path}: line {line}: x, y must lie in [-1, 1]")
            groups.setdefault(value, []).append((x, y))
    if not groups:
        raise SchemaError(f"{path}: no data rows")
    return [(v, np.array(pts, dtype=float)) for v, pts in groups.items()]


def write_binned_csv(path, rows: Iterable[BinnedContrast]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BINNED_COLUMNS)
        for r in rows:
            w.writerow([repr(r.parameter), repr(r.contrast), repr(r.stderr), r.n_bins])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path, record: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(record), fh, indent=2, sort_keys=True)
        fh.write("\n")
