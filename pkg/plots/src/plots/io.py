"""Readers for the solver's text output formats.

These are independent parsers of the documented formats:

frame file::

    micromacro-frame 1
    time = <float>
    dims = nx[ ny]
    fields = name1 name2 ...
    micro <label> = n1 [n2 ...]
    data
    <one whitespace-delimited record per cell, x index fastest>
    micro-data <label>
    <flattened block, wrapped lines>

tables are commented whitespace-delimited numeric files; scaling records
are tables with the fixed column order
``mode workers nx ny nv1 nv2 steps seconds ideal_seconds efficiency``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = "micromacro-frame 1"


class PlotInputError(RuntimeError):
    """An input file or directory does not match the expected format."""


@dataclass
class Frame:
    time: float
    dims: tuple[int, ...]
    fields: tuple[str, ...]
    data: np.ndarray
    micro: dict[str, np.ndarray] = field(default_factory=dict)

    def field_grid(self, name: str) -> np.ndarray:
        if name not in self.fields:
            raise PlotInputError(f"frame has no field {name!r}; "
                                 f"available: {', '.join(self.fields)}")
        col = self.data[:, self.fields.index(name)]
        if len(self.dims) == 1:
            return col.copy()
        nx, ny = self.dims
        return col.reshape(ny, nx).T.copy()


def read_frame(path) -> Frame:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise PlotInputError(f"{path}: cannot read ({exc})") from exc
    if not lines or lines[0].strip() != MAGIC:
        raise PlotInputError(f"{path}: not a frame file (bad magic line)")
    time = dims = fields = None
    micro_shapes: dict[str, tuple[int, ...]] = {}
    i = 1
    while i < len(lines) and lines[i].strip() != "data":
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key == "time":
                time = float(value)
            elif key == "dims":
                dims = tuple(int(t) for t in value.split())
            elif key == "fields":
                fields = tuple(value.split())
            elif key.startswith("micro "):
                micro_shapes[key[len("micro "):].strip()] = tuple(
                    int(t) for t in value.split())
            else:
                raise PlotInputError(f"{path}: unknown header line {line!r}")
        except ValueError as exc:
            raise PlotInputError(f"{path}: bad header value in {line!r}") \
                from exc
    if time is None or dims is None or fields is None:
        raise PlotInputError(f"{path}: incomplete frame header")
    i += 1
    ncells = int(np.prod(dims))
    if i + ncells > len(lines):
        raise PlotInputError(f"{path}: truncated data block")
    try:
        data = np.asarray(
            [[float(t) for t in lines[i + k].split()] for k in range(ncells)])
    except ValueError as exc:
        raise PlotInputError(f"{path}: non-numeric data record") from exc
    if data.shape != (ncells, len(fields)):
        raise PlotInputError(
            f"{path}: data shape {data.shape} does not match dims {dims} "
            f"and {len(fields)} fields")
    i += ncells
    micro: dict[str, np.ndarray] = {}
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if not line.startswith("micro-data "):
            raise PlotInputError(f"{path}: unexpected trailer line {line!r}")
        label = line[len("micro-data "):].strip()
        if label not in micro_shapes:
            raise PlotInputError(f"{path}: undeclared micro block {label!r}")
        shape = micro_shapes[label]
        count = int(np.prod(shape))
        vals: list[float] = []
        while len(vals) < count:
            if i >= len(lines):
                raise PlotInputError(f"{path}: truncated micro block "
                                     f"{label!r}")
            vals.extend(float(t) for t in lines[i].split())
            i += 1
        micro[label] = np.asarray(vals).reshape(shape)
    return Frame(time=time, dims=dims, fields=fields, data=data, micro=micro)


def read_table(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PlotInputError(f"{path}: cannot read ({exc})") from exc
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(t) for t in line.split()])
        except ValueError as exc:
            raise PlotInputError(f"{path}: non-numeric table line "
                                 f"{line!r}") from exc
    if not rows:
        raise PlotInputError(f"{path}: table has no data rows")
    return np.asarray(rows)


RECORD_COLUMNS = ("mode", "workers", "nx", "ny", "nv1", "nv2", "steps",
                  "seconds", "ideal_seconds", "efficiency")


def read_records(path) -> list[dict]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PlotInputError(f"{path}: cannot read ({exc})") from exc
    records = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        t = line.split()
        if len(t) != len(RECORD_COLUMNS):
            raise PlotInputError(f"{path}: malformed scaling record "
                                 f"{line!r}")
        records.append({
            "mode": t[0], "workers": int(t[1]), "nx": int(t[2]),
            "ny": int(t[3]), "nv1": int(t[4]), "nv2": int(t[5]),
            "steps": int(t[6]), "seconds": float(t[7]),
            "ideal_seconds": float(t[8]), "efficiency": float(t[9]),
        })
    if not records:
        raise PlotInputError(f"{path}: no scaling records found")
    return records


def read_convergence(path) -> list[tuple]:
    """Rows of (N, macro_error, macro_ratio, micro_error, micro_ratio)."""
    table = read_table(path)
    if table.shape[1] != 5:
        raise PlotInputError(f"{path}: expected 5 convergence columns, "
                             f"got {table.shape[1]}")
    return [(int(r[0]), r[1], r[2], r[3], r[4]) for r in table]
