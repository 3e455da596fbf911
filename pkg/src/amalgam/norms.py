"""Amalgam, Lebesgue, spacetime, and local-energy norm calculators.

The spatial amalgam norm E^p_q takes the L^p midpoint-quadrature norm over
each unit cube of the lattice tiling and then the l^q sum over cubes; p or q
equal to inf means the discrete supremum.  Because the cubes partition the box
exactly, E^p_p coincides with the global L^p quadrature norm, the monotone
embeddings hold with constant exactly 1, and the product Hoelder inequality
holds with constant 1 as well.

Spacetime flavours:

  LS_EPQ(s, p, q)  time-L^s (weighted quadrature) of the spatial E^p_q norm
  ESPQ(s, p, q)    l^q over cubes of the per-cube L^s-in-time L^p-in-space norm
  LEQ(q)           ESPQ(inf, 2, q) of the field plus ESPQ(2, 2, q) of its
                   gradient (the l^q local energy norm)

The two spacetime flavours coincide when s == q and are ordered by the
discrete Minkowski integral inequality otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    INF,
    DomainError,
    FieldSeries,
    GridField,
    as_exponent,
    recip,
)

_FLAVORS = ("EPQ", "LS_EPQ", "ESPQ", "LEQ")


@dataclass(frozen=True)
class NormSpec:
    """A norm selector: flavor plus its exponent tuple.

    EPQ(p, q); LS_EPQ(s, p, q); ESPQ(s, p, q); LEQ(q).
    """

    flavor: str
    exponents: tuple

    def __post_init__(self):
        if self.flavor not in _FLAVORS:
            raise DomainError(f"unknown norm flavor {self.flavor!r}; expected one of {_FLAVORS}")
        exps = tuple(as_exponent(e) for e in self.exponents)
        n_expected = {"EPQ": 2, "LS_EPQ": 3, "ESPQ": 3, "LEQ": 1}[self.flavor]
        if len(exps) != n_expected:
            raise DomainError(f"{self.flavor} takes {n_expected} exponents, got {len(exps)}")
        object.__setattr__(self, "exponents", exps)

    def label(self) -> str:
        def fmt(e):
            return "inf" if math.isinf(e) else f"{e:g}"

        e = self.exponents
        if self.flavor == "EPQ":
            return f"E^{fmt(e[0])}_{fmt(e[1])}"
        if self.flavor == "LS_EPQ":
            return f"L^{fmt(e[0])}_T E^{fmt(e[1])}_{fmt(e[2])}"
        if self.flavor == "ESPQ":
            return f"E^({fmt(e[0])},{fmt(e[1])})_(T,{fmt(e[2])})"
        return f"LE_{fmt(e[0])}"


def _per_cube_blocks(mag: np.ndarray, spec) -> np.ndarray:
    """Reshape a magnitude array so the last axis enumerates samples per cube."""
    n = spec.per_unit
    shape = []
    for s in spec.sides:
        shape.extend((s, n))
    a = mag.reshape(shape)
    d = spec.d
    order = tuple(range(0, 2 * d, 2)) + tuple(range(1, 2 * d, 2))
    return a.transpose(order).reshape(tuple(spec.sides) + (n ** d,))


def _lq(values: np.ndarray, q: float) -> float:
    vals = np.asarray(values, dtype=np.float64).ravel()
    if vals.size == 0:
        return 0.0
    if math.isinf(q):
        return float(vals.max())
    return float(np.sum(vals ** q) ** (1.0 / q))


def cube_norms(f: GridField, p) -> np.ndarray:
    """Per-cube L^p quadrature norms, shape = spec.sides."""
    p = as_exponent(p)
    blocks = _per_cube_blocks(f.magnitude(), f.spec)
    if math.isinf(p):
        return blocks.max(axis=-1)
    return (np.sum(blocks ** p, axis=-1) * f.spec.cell_volume) ** (1.0 / p)


def amalgam_norm(f: GridField, p, q) -> float:
    """E^p_q norm: l^q over lattice cubes of the per-cube L^p quadrature norm."""
    return _lq(cube_norms(f, p), as_exponent(q))


def lebesgue_norm(f: GridField, p) -> float:
    """Global L^p quadrature norm; equals amalgam_norm(f, p, p) exactly."""
    p = as_exponent(p)
    mag = f.magnitude()
    if math.isinf(p):
        return float(mag.max())
    return float((np.sum(mag ** p) * f.spec.cell_volume) ** (1.0 / p))


def _per_cube_time(series: FieldSeries, s: float, p: float) -> np.ndarray:
    """Per-cube L^s-in-time (weighted) of per-cube L^p-in-space norms."""
    stack = np.stack([cube_norms(f, p) for f in series.fields])
    if math.isinf(s):
        return stack.max(axis=0)
    w = series.weights.reshape((-1,) + (1,) * series.spec.d)
    return (np.sum(w * stack ** s, axis=0)) ** (1.0 / s)


def spacetime_norm(u: FieldSeries, spec: NormSpec) -> float:
    """Evaluate an LS_EPQ or ESPQ spacetime norm on a series."""
    if not isinstance(u, FieldSeries) or u.n_times == 0:
        raise DomainError("spacetime_norm needs a non-empty FieldSeries")
    if spec.flavor == "LS_EPQ":
        s, p, q = spec.exponents
        per_node = np.array([amalgam_norm(f, p, q) for f in u.fields])
        if math.isinf(s):
            return float(per_node.max())
        return float(np.sum(u.weights * per_node ** s) ** (1.0 / s))
    if spec.flavor == "ESPQ":
        s, p, q = spec.exponents
        return _lq(_per_cube_time(u, s, p), q)
    raise DomainError(f"spacetime_norm handles LS_EPQ and ESPQ, not {spec.flavor}")


def local_energy_norm(u: FieldSeries, grad_u: FieldSeries, q) -> float:
    """l^q local energy: ESPQ(inf,2,q) of u plus ESPQ(2,2,q) of grad u."""
    q = as_exponent(q)
    if u.spec != grad_u.spec or not np.array_equal(u.times, grad_u.times):
        raise DomainError("u and grad_u must share grid and time nodes")
    if grad_u.m != u.spec.d * u.m:
        raise DomainError(
            f"grad_u must have d*m = {u.spec.d * u.m} components, got {grad_u.m}"
        )
    a = spacetime_norm(u, NormSpec("ESPQ", (INF, 2.0, q)))
    b = spacetime_norm(grad_u, NormSpec("ESPQ", (2.0, 2.0, q)))
    return a + b


def holder_gap(f: GridField, g: GridField, p, p1, p2, q, q1, q2) -> float:
    """||f||_{E^p1_q1} ||g||_{E^p2_q2} - ||fg||_{E^p_q} under the exponent relation.

    Requires 1/p = 1/p1 + 1/p2 and 1/q <= 1/q1 + 1/q2.  The product field is
    the pointwise product of magnitudes, so the result is nonnegative up to
    rounding for every input.
    """
    p, p1, p2 = as_exponent(p), as_exponent(p1), as_exponent(p2)
    q, q1, q2 = as_exponent(q), as_exponent(q1), as_exponent(q2)
    if abs(recip(p) - recip(p1) - recip(p2)) > 1e-12:
        raise DomainError("need 1/p = 1/p1 + 1/p2")
    if recip(q) > recip(q1) + recip(q2) + 1e-12:
        raise DomainError("need 1/q <= 1/q1 + 1/q2")
    if f.spec != g.spec:
        raise DomainError("fields must share a grid")
    fg = GridField(f.spec, f.magnitude() * g.magnitude())
    return amalgam_norm(f, p1, q1) * amalgam_norm(g, p2, q2) - amalgam_norm(fg, p, q)
