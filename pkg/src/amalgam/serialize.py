"""Binary field format and delimited norm output.

Field files: header {magic "AMLG", version u32, d u32, m u32, cells_per_axis
d*u32, h f64, origin d*i64} followed by component-major little-endian f64
samples in C order.  CSV output is one row per (time, norm_value) with a
header naming the norm.
"""

from __future__ import annotations

import struct

import numpy as np

from .grid import AlignmentError, DomainError, GridField, GridSpec
from .norms import NormSpec

MAGIC = b"AMLG"
VERSION = 1


def write_field(path, field: GridField) -> None:
    spec = field.spec
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIII", MAGIC, VERSION, spec.d, field.m))
        fh.write(struct.pack(f"<{spec.d}I", *spec.cells))
        fh.write(struct.pack("<d", spec.h))
        fh.write(struct.pack(f"<{spec.d}q", *spec.origin))
        fh.write(np.ascontiguousarray(field.samples, dtype="<f8").tobytes())


def read_field(path) -> GridField:
    with open(path, "rb") as fh:
        magic, version, d, m = struct.unpack("<4sIII", fh.read(16))
        if magic != MAGIC:
            raise DomainError(f"not a field file (magic {magic!r})")
        if version != VERSION:
            raise DomainError(f"unsupported field file version {version}")
        if not 1 <= d <= 3:
            raise DomainError(f"unsupported dimension {d}")
        cells = struct.unpack(f"<{d}I", fh.read(4 * d))
        (h,) = struct.unpack("<d", fh.read(8))
        origin = struct.unpack(f"<{d}q", fh.read(8 * d))
        if h <= 0:
            raise AlignmentError(f"cell spacing must be positive, got {h}")
        per_unit = round(1.0 / h)
        if per_unit < 1 or abs(per_unit * h - 1.0) > 1e-9:
            raise AlignmentError(f"cell spacing {h} is not the reciprocal of an integer")
        sides = []
        for c in cells:
            if c % per_unit != 0:
                raise AlignmentError(f"{c} cells do not tile whole unit cubes at h={h}")
            sides.append(c // per_unit)
        spec = GridSpec(tuple(sides), per_unit, origin)
        n = int(np.prod(cells)) * m
        data = np.frombuffer(fh.read(8 * n), dtype="<f8", count=n)
        return GridField(spec, data.reshape((m,) + spec.cells))


def write_norm_csv(path, rows, spec: NormSpec) -> None:
    """Rows of (time, value) under a header naming the norm."""
    with open(path, "w") as fh:
        fh.write(f"time,{spec.label()}\n")
        for t, v in rows:
            fh.write(f"{t!r},{v!r}\n")
