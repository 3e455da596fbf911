"""Closed-form kernels and their amalgam-norm envelopes.

eval_kernel samples the heat kernel, its gradient, the pointwise kernel
majorant Phi(x,t) = (|x| + sqrt(t))^(-d-1), or the Oseen tensor on a grid.
The Oseen tensor has no elementary closed form in physical space, so it is
realised by inverse transform of its Fourier symbol
(delta_ij - k_i k_j/|k|^2) exp(-|k|^2 t) on the periodic box; its accuracy is
validated against the pointwise majorant by ratio scans.

The *_bound functions return right-hand-side envelopes with constant 1;
verification always compares measured-to-envelope ratios for flatness, never
absolute constants.  The large-time term switches on at t >= 1 so both terms
are active exactly at t = 1.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import DomainError, GridField, GridSpec, recip
from .spectral import workspace_for

KERNEL_KINDS = ("heat", "grad_heat", "phi", "oseen")


def _radius_sq(spec: GridSpec) -> np.ndarray:
    coords = spec.coord_arrays()
    return sum(c ** 2 for c in coords)


def eval_kernel(kind: str, t: float, spec: GridSpec) -> GridField:
    """Sample a kernel at time t > 0 on the given grid (centred at x = 0)."""
    if t <= 0:
        raise DomainError(f"kernel evaluation needs t > 0, got {t}")
    if kind not in KERNEL_KINDS:
        raise DomainError(f"unknown kernel kind {kind!r}; expected one of {KERNEL_KINDS}")
    d = spec.d
    if kind == "heat":
        rsq = _radius_sq(spec)
        return GridField(spec, ((4.0 * math.pi * t) ** (-d / 2.0) * np.exp(-rsq / (4.0 * t)))[None])
    if kind == "grad_heat":
        coords = spec.coord_arrays()
        rsq = sum(c ** 2 for c in coords)
        gamma = (4.0 * math.pi * t) ** (-d / 2.0) * np.exp(-rsq / (4.0 * t))
        comps = [np.broadcast_to(-coords[a] / (2.0 * t) * gamma, spec.cells) for a in range(d)]
        return GridField(spec, np.stack(comps))
    if kind == "phi":
        r = np.sqrt(_radius_sq(spec))
        return GridField(spec, ((r + math.sqrt(t)) ** (-(d + 1.0)))[None])
    # oseen: inverse transform of the projected heat symbol; the k = 0 mode is
    # set to delta_ij (the heat convention for the mean).
    if d < 2:
        raise DomainError("the Oseen tensor needs d >= 2")
    ws = workspace_for(spec)
    decay = np.exp(-ws.ksq * t)
    comps = []
    for i in range(d):
        for j in range(d):
            sym = ((1.0 if i == j else 0.0) - ws.k[i] * ws.k[j] / ws.ksq_eff_safe) * decay
            if i == j:
                sym = np.where(ws.ksq == 0.0, 1.0, sym)
            comps.append(np.fft.ifftn(np.broadcast_to(sym, spec.cells)).real / spec.cell_volume)
    return GridField(spec, np.stack(comps))


def kernel_amalgam_bound(kind: str, t: float, p, q, d: int, h: int = 0) -> float:
    """Constant-1 envelope of the kernel's E^p_q norm.

    heat: t^(-h/2) (t^(-d/2+d/2p) + [t >= 1] t^(-d/2+d/2q)), h in {0, 1};
    phi:  t^(-1/2) (t^(-d/2+d/2p) + [t >= 1] t^(-d/2+d/2q)).
    """
    if t <= 0:
        raise DomainError(f"bound needs t > 0, got {t}")
    if kind not in ("heat", "phi"):
        raise DomainError(f"envelope exists for 'heat' and 'phi', not {kind!r}")
    if h not in (0, 1):
        raise DomainError(f"derivative order must be 0 or 1, got {h}")
    rp, rq = recip(p), recip(q)
    spatial = t ** (-d / 2.0 + d * rp / 2.0)
    decay = t ** (-d / 2.0 + d * rq / 2.0) if t >= 1.0 else 0.0
    prefactor = t ** (-h / 2.0) if kind == "heat" else t ** -0.5
    return float(prefactor * (spatial + decay))


def oseen_pointwise_bound(x, t: float, k: int = 0, m: int = 0, d: int = 3) -> float:
    """Normalised pointwise majorant (|x| + sqrt(t))^-(d + k + 2m) for the
    k-th space and m-th time derivative of the Oseen tensor."""
    if t < 0 or (t == 0 and np.linalg.norm(np.atleast_1d(x)) == 0):
        raise DomainError("bound needs t > 0 or |x| > 0")
    r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=np.float64))))
    return (r + math.sqrt(t)) ** (-(d + k + 2 * m))
