"""Text serialization of solver output.

A frame file is a self-describing UTF-8 text file:

    micromacro-frame 1
    time = <float>
    dims = nx[ ny]
    fields = name1 name2 ...
    micro <label> = n1 [n2 ...]        (zero or more declared micro blocks)
    data
    <one whitespace-delimited record per spatial cell, row-major with the
     x index fastest; one column per field>
    micro-data <label>
    <the declared micro block, flattened row-major, wrapped lines>

All values are written with 17 significant digits, which round-trips
doubles exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from micromacro.errors import ConfigurationError

MAGIC = "micromacro-frame 1"

#: canonical macro field names
FIELDS_1D = ("rho", "mom", "energy", "heat")
FIELDS_2D = ("rho", "mom1", "mom2", "e11", "e12", "e22",
             "h111", "h112", "h122", "h222")


class FrameFormatError(ConfigurationError):
    """A frame file does not parse or its header contradicts its data."""


@dataclass
class Frame:
    """One snapshot: macro fields on the spatial grid plus optional micro
    blocks (velocity slices requested by the run configuration)."""

    time: float
    dims: tuple[int, ...]                 # (nx,) or (nx, ny)
    fields: tuple[str, ...]
    data: np.ndarray                      # (ncells, nfields), x fastest
    micro: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        ncells = int(np.prod(self.dims))
        self.data = np.asarray(self.data, dtype=float)
        if self.data.shape != (ncells, len(self.fields)):
            raise FrameFormatError(
                f"frame data shape {self.data.shape} does not match "
                f"dims {self.dims} x fields {len(self.fields)}")

    def field_grid(self, name: str) -> np.ndarray:
        """One field reshaped onto the spatial grid (nx,) or (nx, ny)."""
        col = self.data[:, self.fields.index(name)]
        if len(self.dims) == 1:
            return col.copy()
        nx, ny = self.dims
        # records run x fastest: cell (i, j) sits at row j*nx + i
        return col.reshape(ny, nx).T.copy()


def grids_to_records(grids) -> np.ndarray:
    """Stack (nx,) or (nx, ny) field arrays into the on-disk record layout
    (ncells, nfields) with x fastest."""
    cols = []
    for g in grids:
        g = np.asarray(g, dtype=float)
        cols.append(g if g.ndim == 1 else g.T.reshape(-1))
    return np.stack(cols, axis=-1)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_frame(frame: Frame, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(MAGIC + "\n")
        fh.write(f"time = {_fmt(frame.time)}\n")
        fh.write("dims = " + " ".join(str(d) for d in frame.dims) + "\n")
        fh.write("fields = " + " ".join(frame.fields) + "\n")
        for label, arr in frame.micro.items():
            fh.write(f"micro {label} = "
                     + " ".join(str(d) for d in np.asarray(arr).shape) + "\n")
        fh.write("data\n")
        for row in frame.data:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")
        for label, arr in frame.micro.items():
            fh.write(f"micro-data {label}\n")
            flat = np.asarray(arr, dtype=float).reshape(-1)
            for start in range(0, len(flat), 8):
                fh.write(" ".join(_fmt(v) for v in flat[start:start + 8]) + "\n")


def read_frame(path) -> Frame:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise FrameFormatError(f"{path}: not a frame file (bad magic line)")
    time = None
    dims = None
    fields = None
    micro_shapes: dict[str, tuple[int, ...]] = {}
    i = 1
    while i < len(lines) and lines[i].strip() != "data":
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
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
            raise FrameFormatError(f"{path}: unknown header line {line!r}")
    if time is None or dims is None or fields is None:
        raise FrameFormatError(f"{path}: incomplete header")
    i += 1  # skip "data"
    ncells = int(np.prod(dims))
    rows = []
    for _ in range(ncells):
        if i >= len(lines):
            raise FrameFormatError(f"{path}: truncated data block")
        rows.append([float(t) for t in lines[i].split()])
        i += 1
    data = np.asarray(rows, dtype=float)
    if data.shape != (ncells, len(fields)):
        raise FrameFormatError(
            f"{path}: data shape {data.shape} does not match header "
            f"dims {dims} and {len(fields)} fields")
    micro = {}
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if not line.startswith("micro-data "):
            raise FrameFormatError(f"{path}: unexpected trailer line {line!r}")
        label = line[len("micro-data "):].strip()
        if label not in micro_shapes:
            raise FrameFormatError(f"{path}: undeclared micro block {label!r}")
        shape = micro_shapes[label]
        count = int(np.prod(shape))
        vals: list[float] = []
        while len(vals) < count:
            if i >= len(lines):
                raise FrameFormatError(f"{path}: truncated micro block {label!r}")
            vals.extend(float(t) for t in lines[i].split())
            i += 1
        micro[label] = np.asarray(vals, dtype=float).reshape(shape)
    missing = set(micro_shapes) - set(micro)
    if missing:
        raise FrameFormatError(f"{path}: missing micro blocks {sorted(missing)}")
    return Frame(time=time, dims=dims, fields=fields, data=data, micro=micro)


# ---------------------------------------------------------------------------
# small text tables (sweeps, timings, summaries)
# ---------------------------------------------------------------------------

def write_table(path, header: str, rows) -> None:
    """Write a commented, whitespace-delimited numeric table."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {header}\n")
        for row in rows:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def read_table(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(t) for t in line.split()])
    return np.asarray(rows, dtype=float)


def write_summary(path, entries: dict) -> None:
    """One `key = value` per line; values are formatted with full
    precision when numeric."""
    with open(path, "w", encoding="utf-8") as fh:
        for k, v in entries.items():
            if isinstance(v, float):
                fh.write(f"{k} = {_fmt(v)}\n")
            else:
                fh.write(f"{k} = {v}\n")


def read_summary(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


__all__ = [
    "MAGIC",
    "FIELDS_1D",
    "FIELDS_2D",
    "Frame",
    "FrameFormatError",
    "grids_to_records",
    "write_frame",
    "read_frame",
    "write_table",
    "read_table",
    "write_summary",
    "read_summary",
]
