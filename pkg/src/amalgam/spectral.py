"""Fourier-spectral operators on the periodic box.

The periodic box stands in for whole space; experiments keep compact support
plus a diffusion margin inside the box so truncation stays below the fit
tolerances (checked by a box-doubling scenario, not assumed).

Mode conventions:
  * heat semigroup multiplies each mode by exp(-|k|^2 t); the k = 0 mode is
    passed through (identity on the mean),
  * the Leray projection applies delta_ij - k_i k_j / |k|^2 for k != 0 and
    passes the mean through,
  * the combined evolve-project-divergence operator zeroes the mean, since
    the divergence kills constants.

The Duhamel integral uses exponential-time-differencing quadrature: on each
substep the integrand's tensor spectrum is held at its midpoint value (the
average of the endpoint spectra) while the semigroup factor is integrated
exactly per mode.  The factors compose exactly across substeps, so the
accumulation below equals the direct sum and is unconditionally stable,
second order in the substep width.

Products feeding the bilinear term are dealiased with the two-thirds rule.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grid import DomainError, FieldSeries, GridField, GridSpec


class SpectralWorkspace:
    """Wavenumbers, |k|^2, and the dealias mask for one grid.

    ``k`` holds the odd-operator wavenumbers: the unpaired Nyquist mode of
    even-sized axes is zeroed there so that gradient, divergence, and the
    projection (all odd in k) map real fields to real fields.  ``ksq`` keeps
    the full squared wavenumbers for the (even) diffusion factor, while
    ``ksq_eff_safe`` is the squared odd-operator wavenumber with zeros
    replaced by 1 for safe division.

    Workspaces are cached per GridSpec; treat them as read-only.  Use one
    workspace per worker if calls mutate no shared state (they do not).
    """

    __slots__ = ("spec", "k", "ksq", "ksq_safe", "ksq_eff", "ksq_eff_safe", "dealias")

    def __init__(self, spec: GridSpec):
        self.spec = spec
        d = spec.d
        ks_full, ks_eff = [], []
        for ax in range(d):
            n = spec.cells[ax]
            k1 = 2.0 * np.pi * np.fft.fftfreq(n, d=spec.h)
            k_eff = k1.copy()
            if n % 2 == 0:
                k_eff[n // 2] = 0.0
            shape = [1] * d
            shape[ax] = n
            ks_full.append(k1.reshape(shape))
            ks_eff.append(k_eff.reshape(shape))
        self.k = tuple(ks_eff)
        self.ksq = sum(k ** 2 for k in ks_full)
        self.ksq_safe = np.where(self.ksq == 0.0, 1.0, self.ksq)
        self.ksq_eff = sum(k ** 2 for k in ks_eff)
        self.ksq_eff_safe = np.where(self.ksq_eff == 0.0, 1.0, self.ksq_eff)
        mask = np.ones(spec.cells, dtype=bool)
        for ax in range(d):
            kmax = np.abs(ks_full[ax]).max()
            mask &= np.abs(ks_full[ax]) <= (2.0 / 3.0) * kmax
        self.dealias = mask


@lru_cache(maxsize=64)
def workspace_for(spec: GridSpec) -> SpectralWorkspace:
    return SpectralWorkspace(spec)


def _fft(field: GridField) -> np.ndarray:
    axes = tuple(range(1, field.spec.d + 1))
    return np.fft.fftn(field.samples, axes=axes)


def _ifft(spec: GridSpec, fhat: np.ndarray) -> GridField:
    axes = tuple(range(1, spec.d + 1))
    return GridField(spec, np.fft.ifftn(fhat, axes=axes).real)


def heat_evolve(f: GridField, t: float, h: int = 0) -> GridField:
    """Heat semigroup exp(t Laplacian); h = 1 additionally takes the gradient.

    With h = 1 the output has d*m components ordered axis-major: component
    a*m + c is the a-derivative of input component c.  t = 0, h = 0 is the
    identity (returned without a transform round trip).
    """
    if t < 0:
        raise DomainError(f"heat_evolve needs t >= 0, got {t}")
    if h not in (0, 1):
        raise DomainError(f"derivative order must be 0 or 1, got {h}")
    if t == 0.0 and h == 0:
        return f
    ws = workspace_for(f.spec)
    fhat = _fft(f) * np.exp(-ws.ksq * t)
    if h == 0:
        return _ifft(f.spec, fhat)
    parts = [1j * ws.k[a] * fhat for a in range(f.spec.d)]
    return _ifft(f.spec, np.concatenate(parts, axis=0))


def gradient(f: GridField) -> GridField:
    """Spectral gradient; output component a*m + c = d_a f_c."""
    return heat_evolve(f, 0.0, h=1)


def translate(f: GridField, tau) -> GridField:
    """Trigonometric translation x -> x + tau (periodic)."""
    tau = np.atleast_1d(np.asarray(tau, dtype=np.float64))
    if tau.size != f.spec.d:
        raise DomainError("tau must have one entry per axis")
    ws = workspace_for(f.spec)
    phase = np.exp(1j * sum(ws.k[a] * tau[a] for a in range(f.spec.d)))
    return _ifft(f.spec, _fft(f) * phase)


def _project_hat(ws: SpectralWorkspace, vhat: np.ndarray) -> np.ndarray:
    kdotv = sum(ws.k[a] * vhat[a] for a in range(len(ws.k)))
    return np.stack([vhat[a] - ws.k[a] * kdotv / ws.ksq_eff_safe for a in range(len(ws.k))])


def leray_project(v: GridField) -> GridField:
    """Helmholtz/Leray projection onto divergence-free fields (mean passes through)."""
    d = v.spec.d
    if v.m != d:
        raise DomainError(f"leray_project needs a d-component field, got m={v.m}")
    ws = workspace_for(v.spec)
    return _ifft(v.spec, _project_hat(ws, _fft(v)))


def divergence_max(v: GridField) -> float:
    """max_k |k . vhat| divided by the spectral l2 size of v (0 for v = 0)."""
    d = v.spec.d
    if v.m != d:
        raise DomainError(f"divergence needs a d-component field, got m={v.m}")
    ws = workspace_for(v.spec)
    vhat = _fft(v)
    div = sum(ws.k[a] * vhat[a] for a in range(d))
    scale = np.sqrt(np.mean(np.abs(vhat) ** 2) * d)
    if scale == 0.0:
        return 0.0
    return float(np.abs(div).max() / scale)


def _div_project_hat(ws: SpectralWorkspace, Fhat: np.ndarray) -> np.ndarray:
    """Apply P (i k_l) to a d*d tensor spectrum F_{lj}; zeroes the mean mode.

    Tensor components are stored l*d + j: l is the contracted derivative
    index, j the vector index acted on by the projection.
    """
    d = len(ws.k)
    w = np.stack([
        sum(1j * ws.k[l] * Fhat[l * d + j] for l in range(d))
        for j in range(d)
    ])
    out = _project_hat(ws, w)
    out[:, ws.ksq_eff == 0.0] = 0.0
    return out


def oseen_apply(F: GridField, t: float) -> GridField:
    """Evolve-project-divergence of a d*d tensor field at time t > 0."""
    if t <= 0:
        raise DomainError(f"oseen_apply needs t > 0, got {t}")
    d = F.spec.d
    if F.m != d * d:
        raise DomainError(f"oseen_apply needs d*d components, got m={F.m}")
    ws = workspace_for(F.spec)
    vhat = _div_project_hat(ws, _fft(F)) * np.exp(-ws.ksq * t)
    return _ifft(F.spec, vhat)


def _stream_div_hats(spec: GridSpec, times, get_div_hat):
    """Accumulate the Duhamel velocity spectrum along the node sequence.

    get_div_hat(j) must return the projected divergence spectrum of the
    tensor at node j.  The k = 0 mode never contributes (the divergence
    zeroes it), so dividing by ksq_safe is harmless.
    """
    ws = workspace_for(spec)
    d = spec.d
    acc = np.zeros((d,) + spec.cells, dtype=np.complex128)
    prev = get_div_hat(0)
    yield 0, acc
    for j in range(1, len(times)):
        cur = get_div_hat(j)
        dt = times[j] - times[j - 1]
        E = np.exp(-ws.ksq * dt)
        acc = acc * E + 0.5 * (prev + cur) * ((1.0 - E) / ws.ksq_safe)
        prev = cur
        yield j, acc


def _tensor_div_hat_getter(F: FieldSeries):
    ws = workspace_for(F.spec)
    d = F.spec.d
    if F.m != d * d:
        raise DomainError(f"duhamel needs d*d tensor components, got m={F.m}")
    if F.times[0] > 1e-12:
        raise DomainError("integrand nodes must cover the interval from t = 0")

    def get(j):
        return _div_project_hat(ws, _fft(F.fields[j]))

    return get


def duhamel_series(F: FieldSeries) -> FieldSeries:
    """The Duhamel velocity at every node of the tensor series F."""
    get = _tensor_div_hat_getter(F)
    fields = [_ifft(F.spec, acc) for _, acc in _stream_div_hats(F.spec, F.times, get)]
    return FieldSeries(F.times, fields, F.weights)


def duhamel(F: FieldSeries, t: float) -> GridField:
    """The Duhamel velocity at one time t covered by the nodes of F."""
    if t < F.times[0] - 1e-12 or t > F.times[-1] + 1e-12:
        raise DomainError(f"t={t} outside the covered span [{F.times[0]}, {F.times[-1]}]")
    get = _tensor_div_hat_getter(F)
    ws = workspace_for(F.spec)
    node = int(np.argmin(np.abs(F.times - t)))
    if abs(F.times[node] - t) <= 1e-12:
        for j, acc in _stream_div_hats(F.spec, F.times, get):
            if j == node:
                return _ifft(F.spec, acc)
    # t falls inside a substep: finish with a partial step whose endpoint
    # spectrum is linearly interpolated in time.
    lo = max(int(np.searchsorted(F.times, t) - 1), 0)
    acc = None
    for j, a in _stream_div_hats(F.spec, F.times, get):
        if j == lo:
            acc = a
            break
    t0, t1 = F.times[lo], F.times[lo + 1]
    lam = (t - t0) / (t1 - t0)
    h0, h1 = get(lo), get(lo + 1)
    mid = 0.5 * (h0 + ((1.0 - lam) * h0 + lam * h1))
    E = np.exp(-ws.ksq * (t - t0))
    acc = acc * E + mid * ((1.0 - E) / ws.ksq_safe)
    return _ifft(F.spec, acc)


def outer_product_series(f: FieldSeries, g: FieldSeries) -> FieldSeries:
    """Node-wise dealiased tensor product (f tensor g)_{lj} = f_l g_j."""
    if f.spec != g.spec or not np.array_equal(f.times, g.times):
        raise DomainError("series must share grid and time nodes")
    d = f.spec.d
    if f.m != d or g.m != d:
        raise DomainError("outer product needs d-component velocity series")
    ws = workspace_for(f.spec)
    axes = tuple(range(1, d + 1))
    out_fields = []
    for fa, fb in zip(f.fields, g.fields):
        prod = np.stack([
            fa.samples[l] * fb.samples[j]
            for l in range(d)
            for j in range(d)
        ])
        phat = np.fft.fftn(prod, axes=axes) * ws.dealias
        out_fields.append(GridField(f.spec, np.fft.ifftn(phat, axes=axes).real))
    return FieldSeries(f.times, out_fields, f.weights)


def _bilinear_div_hat_getter(f: FieldSeries, g: FieldSeries):
    if f.spec != g.spec or not np.array_equal(f.times, g.times):
        raise DomainError("series must share grid and time nodes")
    d = f.spec.d
    if f.m != d or g.m != d:
        raise DomainError("the bilinear term needs d-component velocity series")
    if f.times[0] > 1e-12:
        raise DomainError("series must cover the interval from t = 0")
    ws = workspace_for(f.spec)
    axes = tuple(range(1, d + 1))

    def get(j):
        fa, fb = f.fields[j], g.fields[j]
        prod = np.stack([
            fa.samples[l] * fb.samples[jj]
            for l in range(d)
            for jj in range(d)
        ])
        phat = np.fft.fftn(prod, axes=axes) * ws.dealias
        return _div_project_hat(ws, phat)

    return get


def bilinear_series(f: FieldSeries, g: FieldSeries) -> FieldSeries:
    """B(f, g) at every node: the Duhamel integral of the dealiased product."""
    get = _bilinear_div_hat_getter(f, g)
    fields = [_ifft(f.spec, acc) for _, acc in _stream_div_hats(f.spec, f.times, get)]
    return FieldSeries(f.times, fields, f.weights)


def bilinear_B(f: FieldSeries, g: FieldSeries, t: float) -> GridField:
    """B(f, g)(t); bilinear in each argument."""
    return duhamel(outer_product_series(f, g), t)
