"""Uniform lattice-aligned grids, sampled fields, and time series.

Space is modelled as a rectangular box tiled by unit cubes centred at integer
lattice points.  Each cube is subdivided into ``per_unit`` cells per axis
(cell spacing h = 1/per_unit) and a field stores one sample per cell, taken at
the cell midpoint.  Midpoint quadrature over one unit cube therefore uses
exactly per_unit**d samples, and the cubes partition the box with no overlap.
That exact tiling is what makes the discrete norm identities (p = q collapse,
constant-1 embeddings) hold to machine precision.

All types are immutable after construction and all operations on them are
pure, so they can be evaluated concurrently over parameter grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

INF = math.inf


class AlignmentError(ValueError):
    """Grid geometry is not aligned with the unit lattice."""


class DomainError(ValueError):
    """Arguments outside an operation's admissible domain."""


class ResolutionError(ValueError):
    """Grid too coarse to resolve the requested construction."""


class PreconditionError(ValueError):
    """Input violates a documented precondition."""


def as_exponent(p) -> float:
    """Validate an integrability exponent; returns a float in [1, inf]."""
    if isinstance(p, Exponent):
        return p.value
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"exponent must lie in [1, inf], got {p!r}")
    return p


def recip(p) -> float:
    """1/p as an extended real; recip(inf) == 0.0 exactly."""
    p = as_exponent(p)
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class Exponent:
    """An integrability exponent in [1, inf], with inf explicitly representable."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 1.0:
            raise DomainError(f"exponent must lie in [1, inf], got {v!r}")
        object.__setattr__(self, "value", v)

    @property
    def reciprocal(self) -> float:
        return recip(self.value)

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @classmethod
    def parse(cls, text) -> "Exponent":
        """Parse '2', '3/2', or 'inf' (case-insensitive)."""
        if isinstance(text, (int, float)):
            return cls(float(text))
        s = str(text).strip().lower()
        if s in ("inf", "infinity", "oo"):
            return cls(INF)
        if "/" in s:
            return cls(float(Fraction(s)))
        return cls(float(s))

    def __str__(self):
        return "inf" if self.is_inf else f"{self.value:g}"


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a lattice-aligned uniform grid.

    sides     -- number of unit cubes along each axis (the box side lengths)
    per_unit  -- cells per unit length, so the cell spacing is h = 1/per_unit
    origin    -- integer lattice coordinate of the first cube along each axis
    """

    sides: tuple
    per_unit: int
    origin: tuple = None

    def __post_init__(self):
        sides = tuple(int(s) for s in (self.sides if hasattr(self.sides, "__len__") else (self.sides,)))
        if not 1 <= len(sides) <= 3:
            raise DomainError(f"dimension must be 1, 2 or 3, got {len(sides)}")
        if any(s < 1 for s in sides):
            raise DomainError(f"box side lengths must be positive integers, got {sides}")
        n = int(self.per_unit)
        if n < 1 or n != self.per_unit:
            raise AlignmentError(f"per_unit (= 1/h) must be a positive integer, got {self.per_unit!r}")
        origin = self.origin
        if origin is None:
            origin = tuple(0 for _ in sides)
        origin = tuple(int(o) for o in (origin if hasattr(origin, "__len__") else (origin,)))
        if len(origin) != len(sides):
            raise DomainError("origin must have one lattice coordinate per axis")
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "per_unit", n)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def centered(cls, d: int, side: int, per_unit: int) -> "GridSpec":
        """Box of `side` unit cubes per axis, roughly centred on the origin."""
        return cls(tuple(side for _ in range(d)), per_unit, tuple(-(side // 2) for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.sides)

    @property
    def h(self) -> float:
        return 1.0 / self.per_unit

    @property
    def cells(self) -> tuple:
        return tuple(s * self.per_unit for s in self.sides)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells))

    @property
    def cell_volume(self) -> float:
        return self.h ** self.d

    def axis_coords(self, axis: int) -> np.ndarray:
        """Cell-midpoint coordinates along one axis."""
        n = self.sides[axis] * self.per_unit
        lo = self.origin[axis] - 0.5
        return lo + (np.arange(n) + 0.5) * self.h

    def coord_arrays(self):
        """Open (broadcastable) meshgrid of cell-midpoint coordinates."""
        return np.meshgrid(*[self.axis_coords(i) for i in range(self.d)], indexing="ij", sparse=True)

    @property
    def box_lo(self) -> tuple:
        return tuple(o - 0.5 for o in self.origin)

    @property
    def box_hi(self) -> tuple:
        return tuple(o - 0.5 + s for o, s in zip(self.origin, self.sides))

    def cube_lattice(self):
        """Integer lattice coordinates of all cubes, as d index arrays."""
        return np.meshgrid(
            *[self.origin[i] + np.arange(self.sides[i]) for i in range(self.d)],
            indexing="ij",
            sparse=True,
        )

    def doubled(self) -> "GridSpec":
        """Same cell spacing on a box with doubled sides (re-centred)."""
        d = self.d
        new_sides = tuple(2 * s for s in self.sides)
        centers = [o + s / 2.0 for o, s in zip(self.origin, self.sides)]
        new_origin = tuple(int(round(c - ns / 2.0)) for c, ns in zip(centers, new_sides))
        return GridSpec(new_sides, self.per_unit, new_origin)


class GridField:
    """Sampled real field on a grid: one float64 value per (component, cell)."""

    __slots__ = ("spec", "samples")

    def __init__(self, spec: GridSpec, samples):
        arr = np.array(samples, dtype=np.float64)
        if arr.shape == spec.cells:
            arr = arr.reshape((1,) + spec.cells)
        if arr.ndim != spec.d + 1 or arr.shape[1:] != spec.cells:
            raise DomainError(f"samples shape {arr.shape} does not match grid cells {(spec.cells)}")
        if arr.shape[0] < 1:
            raise DomainError("field needs at least one component")
        if not np.isfinite(arr).all():
            raise DomainError("field samples must all be finite")
        arr.setflags(write=False)
        self.spec = spec
        self.samples = arr

    @property
    def m(self) -> int:
        return self.samples.shape[0]

    def magnitude(self) -> np.ndarray:
        """Pointwise Euclidean magnitude across components."""
        if self.m == 1:
            return np.abs(self.samples[0])
        return np.sqrt(np.einsum("c...,c...->...", self.samples, self.samples))

    def scaled(self, factor: float) -> "GridField":
        return GridField(self.spec, self.samples * float(factor))

    @classmethod
    def zeros(cls, spec: GridSpec, components: int = 1) -> "GridField":
        return cls(spec, np.zeros((components,) + spec.cells))

    @classmethod
    def from_function(cls, spec: GridSpec, fn, components: int = 1) -> "GridField":
        """Sample fn(*coords) -> array (or tuple of arrays, one per component)."""
        coords = spec.coord_arrays()
        out = fn(*coords)
        if components == 1 and not isinstance(out, (tuple, list)):
            arr = np.broadcast_to(np.asarray(out, dtype=np.float64), spec.cells)[None]
        else:
            parts = out if isinstance(out, (tuple, list)) else [out]
            arr = np.stack([np.broadcast_to(np.asarray(p, dtype=np.float64), spec.cells) for p in parts])
        return cls(spec, arr)

    def __repr__(self):
        return f"GridField(d={self.spec.d}, m={self.m}, cells={self.spec.cells})"


def trapezoid_weights(times: np.ndarray) -> np.ndarray:
    """Trapezoidal quadrature weights on arbitrary nodes; they sum to the span."""
    t = np.asarray(times, dtype=np.float64)
    if t.size < 2:
        raise DomainError("trapezoid weights need at least two time nodes")
    w = np.empty_like(t)
    w[0] = (t[1] - t[0]) / 2.0
    w[-1] = (t[-1] - t[-2]) / 2.0
    if t.size > 2:
        w[1:-1] = (t[2:] - t[:-2]) / 2.0
    return w


class FieldSeries:
    """Time-indexed sequence of fields on one grid, with quadrature weights.

    If no weights are given, trapezoidal weights on the stored nodes are used,
    which sum exactly to the covered time span.  Explicit weights (e.g. band
    midpoint rules for piecewise-constant-in-time data) are accepted as-is and
    must be positive.
    """

    __slots__ = ("times", "fields", "weights")

    def __init__(self, times, fields, weights=None):
        t = np.array(times, dtype=np.float64)
        if t.ndim != 1 or t.size == 0:
            raise DomainError("times must be a non-empty 1-d sequence")
        if t[0] < 0:
            raise DomainError("times must start at t0 >= 0")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise DomainError("times must be strictly increasing")
        fields = list(fields)
        if len(fields) != t.size:
            raise DomainError("need one field per time node")
        spec0, m0 = fields[0].spec, fields[0].m
        for f in fields[1:]:
            if f.spec != spec0 or f.m != m0:
                raise DomainError("all fields in a series must share grid and component count")
        if weights is None:
            w = trapezoid_weights(t) if t.size > 1 else np.array([1.0])
        else:
            w = np.array(weights, dtype=np.float64)
            if w.shape != t.shape:
                raise DomainError("need one weight per time node")
            if np.any(w <= 0):
                raise DomainError("quadrature weights must be positive")
        t.setflags(write=False)
        w.setflags(write=False)
        self.times = t
        self.fields = tuple(fields)
        self.weights = w

    @property
    def spec(self) -> GridSpec:
        return self.fields[0].spec

    @property
    def m(self) -> int:
        return self.fields[0].m

    @property
    def n_times(self) -> int:
        return self.times.size

    @property
    def span(self) -> float:
        return float(self.times[-1] - self.times[0])

    def map(self, fn) -> "FieldSeries":
        """New series with fn applied to every field (times/weights kept)."""
        return FieldSeries(self.times, [fn(f) for f in self.fields], self.weights)

    def __repr__(self):
        return f"FieldSeries(n={self.n_times}, t=[{self.times[0]:g}, {self.times[-1]:g}], m={self.m})"


def series_combine(a: FieldSeries, b: FieldSeries, ca: float = 1.0, cb: float = 1.0) -> FieldSeries:
    """Node-wise linear combination ca*a + cb*b of two aligned series."""
    if a.n_times != b.n_times or not np.array_equal(a.times, b.times):
        raise DomainError("series must share time nodes")
    if a.spec != b.spec or a.m != b.m:
        raise DomainError("series must share grid and component count")
    fields = [
        GridField(a.spec, ca * fa.samples + cb * fb.samples)
        for fa, fb in zip(a.fields, b.fields)
    ]
    return FieldSeries(a.times, fields, a.weights)
