"""Bit-exact field persistence: JSON header plus raw binary payload.

The payload holds interleaved little-endian float64 (real, imaginary) pairs
in row-major order with the x axis fastest; the header (same path with
.json appended) records grid geometry, time, model and payload size so the
two files validate each other. The plotting frontend reads the same pair.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import ComplexField, ModelSpec, make_grid

__all__ = ["write_snapshot", "read_snapshot", "SNAPSHOT_FORMAT_VERSION"]

SNAPSHOT_FORMAT_VERSION = 1


def _header_path(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".json")


def write_snapshot(field: ComplexField, path, model: ModelSpec | None = None) -> Path:
    """Write the field to `path` (payload) and `path`.json (header)."""
    path = Path(path)
    grid = field.grid
    # x fastest on disk: reverse the axis order, then C-ravel
    arr = np.ascontiguousarray(field.values.transpose(tuple(range(grid.dim))[::-1]))
    flat = np.empty(arr.size * 2, dtype="<f8")
    flat[0::2] = arr.real.ravel()
    flat[1::2] = arr.imag.ravel()
    payload = flat.tobytes()
    header = {
        "format_version": SNAPSHOT_FORMAT_VERSION,
        "endianness": "little",
        "dtype": "float64-interleaved-complex",
        "axis_order": "x-fastest",
        "lengths": list(grid.lengths),
        "counts": list(grid.counts),
        "time": field.time,
        "model": None
        if model is None
        else {"dim": model.dim, "eta1": model.eta1, "eta2": model.eta2},
        "payload_bytes": len(payload),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(payload)
    _header_path(path).write_text(json.dumps(header, indent=1))
    return path


def read_snapshot(path) -> ComplexField:
    """Read a field written by write_snapshot; validates version and size."""
    path = Path(path)
    header = json.loads(_header_path(path).read_text())
    if header.get("format_version") != SNAPSHOT_FORMAT_VERSION:
        raise ValueError(
            f"snapshot format version {header.get('format_version')} "
            f"!= supported {SNAPSHOT_FORMAT_VERSION}"
        )
    counts = [int(n) for n in header["counts"]]
    expected = int(np.prod(counts)) * 16
    payload = path.read_bytes()
    if len(payload) != expected or header.get("payload_bytes") != expected:
        raise ValueError(
            f"payload size {len(payload)} does not match header geometry ({expected})"
        )
    flat = np.frombuffer(payload, dtype="<f8")
    values = (flat[0::2] + 1j * flat[1::2]).reshape(counts[::-1])
    values = values.transpose(tuple(range(len(counts)))[::-1])
    grid = make_grid(header["lengths"], counts)
    return ComplexField(grid, values, float(header["time"]))
