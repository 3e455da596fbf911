"""Picard construction of mild solutions and the mollified/cutoff scheme.

The fixed-point map is u -> caloric(u0) - B(u, u) evaluated on a time grid
geometrically refined toward t = 0 (node t_j = T 2^(j - n_steps)), which
resolves the weighted sup norms dominated by small times.  Iteration stops
when the regime norm of the difference of consecutive iterates falls below
the contraction tolerance; failure to contract within the iteration cap is
reported on the trace, not raised, since it signals data too large for the
regime rather than a programming error.

Regime norms (3-d Navier-Stokes):
  SUBCRITICAL(r, q)     sup_t ||u(t)||_{E^r_q}, data r > 3
  CRITICAL_SMALL(q)     sup_t t^(1/4) ||u(t)||_{E^6_q}, data in E^3_q
  CRITICAL_DECAY(q<=3)  sup_t t^(1/4) ||u(t)||_{E^6_q1}, 1/q1 = 1/q - 1/6

The regularized scheme replaces the advected velocity by its mollification
and localises the transported one with a cutoff, then iterates the same map
in the l^q local energy norm.  Implementation constants are fixed here and
echoed in every report: smallness factor 8 in the subcritical time scale,
window factor c = 1/64 for the regularized horizon, lambda0 = 1/64 in the
scale-restricted a priori bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import (
    INF,
    AlignmentError,
    DomainError,
    FieldSeries,
    GridField,
    GridSpec,
    PreconditionError,
    ResolutionError,
    as_exponent,
    recip,
    series_combine,
)
from .norms import NormSpec, amalgam_norm, cube_norms, local_energy_norm
from .spectral import (
    bilinear_series,
    divergence_max,
    duhamel_series,
    gradient,
    heat_evolve,
    workspace_for,
)

SMALLNESS_FACTOR = 8.0
REGULARIZED_WINDOW_FACTOR = 1.0 / 64.0
LAMBDA0 = 1.0 / 64.0

REGIMES = ("SUBCRITICAL", "CRITICAL_SMALL", "CRITICAL_DECAY")


@dataclass(frozen=True)
class SolverConfig:
    T: float
    n_steps: int = 12
    picard_cap: int = 20
    contraction_tol: float = 1e-9
    regime: str = "SUBCRITICAL"
    r: float = 6.0
    q: float = 2.0

    def __post_init__(self):
        if self.T <= 0:
            raise DomainError("T must be positive")
        if self.n_steps < 1 or self.picard_cap < 1:
            raise DomainError("n_steps and picard_cap must be >= 1")
        if self.regime not in REGIMES:
            raise DomainError(f"regime must be one of {REGIMES}")
        r, q = as_exponent(self.r), as_exponent(self.q)
        if self.regime == "SUBCRITICAL" and not r > 3:
            raise DomainError("subcritical data needs r > 3")
        if self.regime in ("CRITICAL_SMALL", "CRITICAL_DECAY") and r != 3:
            raise DomainError("critical regimes take data in E^3_q (r = 3)")
        if self.regime == "CRITICAL_DECAY" and q > 3:
            raise DomainError("the decay regime needs q <= 3")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "q", q)

    def norm_label(self) -> str:
        if self.regime == "SUBCRITICAL":
            return f"sup_t {NormSpec('EPQ', (self.r, self.q)).label()}"
        if self.regime == "CRITICAL_SMALL":
            return f"sup_t t^(1/4) {NormSpec('EPQ', (6, self.q)).label()}"
        q1 = 1.0 / (recip(self.q) - 1.0 / 6.0)
        return f"sup_t t^(1/4) {NormSpec('EPQ', (6, q1)).label()}"


@dataclass
class PicardTrace:
    iterate_norms: list = field(default_factory=list)
    diff_norms: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    final_residual: float = math.nan
    norm_label: str = ""

    @property
    def contraction_ratios(self) -> list:
        d = self.diff_norms
        return [d[i + 1] / d[i] for i in range(len(d) - 1) if d[i] > 0]


def dyadic_times(T: float, n_steps: int) -> np.ndarray:
    """t = 0 followed by T 2^(j - n_steps), j = 1..n_steps."""
    return np.concatenate(([0.0], T * 2.0 ** (np.arange(1, n_steps + 1) - float(n_steps))))


def regime_norm(series: FieldSeries, cfg: SolverConfig) -> float:
    t = series.times
    if cfg.regime == "SUBCRITICAL":
        return max(amalgam_norm(f, cfg.r, cfg.q) for f in series.fields)
    if cfg.regime == "CRITICAL_SMALL":
        qq = cfg.q
    else:
        qq = 1.0 / (recip(cfg.q) - 1.0 / 6.0)
    vals = [
        tt ** 0.25 * amalgam_norm(f, 6.0, qq)
        for tt, f in zip(t, series.fields)
        if tt > 0
    ]
    return max(vals) if vals else 0.0


def _caloric_series(u0: GridField, times: np.ndarray) -> FieldSeries:
    return FieldSeries(times, [heat_evolve(u0, float(t)) for t in times])


def picard_solve(u0: GridField, cfg: SolverConfig):
    """Iterate u -> caloric - B(u, u) in the regime norm.

    Returns (series, trace).  Raises PreconditionError on data that is not
    discretely divergence-free; a failure to contract is reported through
    trace.converged = False.
    """
    if u0.m != u0.spec.d:
        raise PreconditionError("initial data must have d components")
    if divergence_max(u0) > 1e-10:
        raise PreconditionError("initial data is not divergence-free (spectral check)")
    times = dyadic_times(cfg.T, cfg.n_steps)
    caloric = _caloric_series(u0, times)
    trace = PicardTrace(norm_label=cfg.norm_label())

    u = caloric
    trace.iterate_norms.append(regime_norm(u, cfg))
    if trace.iterate_norms[0] == 0.0:
        trace.converged = True
        trace.final_residual = 0.0
        return u, trace

    scale = max(trace.iterate_norms[0], 1e-300)
    for _ in range(cfg.picard_cap):
        trace.iterations += 1
        u_next = series_combine(caloric, bilinear_series(u, u), 1.0, -1.0)
        diff = regime_norm(series_combine(u_next, u, 1.0, -1.0), cfg)
        trace.diff_norms.append(diff)
        trace.iterate_norms.append(regime_norm(u_next, cfg))
        u = u_next
        if diff <= cfg.contraction_tol * scale:
            trace.converged = True
            break
        if not math.isfinite(diff) or diff > 1e6 * scale:
            break
    residual_series = series_combine(
        u, series_combine(caloric, bilinear_series(u, u), 1.0, -1.0), 1.0, -1.0
    )
    trace.final_residual = regime_norm(residual_series, cfg)
    return u, trace


def subcritical_timescale(u0_norm: float, r, factor: float = SMALLNESS_FACTOR) -> float:
    """Largest dyadic T with T^(1/2 - 3/(2r)) + T^(1/2) <= 1/(factor * norm).

    Capped at 2^20; the cap is returned as the norm tends to zero.
    """
    r = as_exponent(r)
    if not r > 3:
        raise DomainError("the subcritical time scale needs r > 3")
    if u0_norm < 0:
        raise DomainError("norm must be nonnegative")
    if u0_norm == 0.0 or not math.isfinite(u0_norm):
        return 2.0 ** 20 if u0_norm == 0.0 else 2.0 ** -60
    bound = 1.0 / (factor * u0_norm)
    a = 0.5 - 3.0 / (2.0 * r) if not math.isinf(r) else 0.5
    for j in range(20, -61, -1):
        T = 2.0 ** j
        if T ** a + T ** 0.5 <= bound:
            return T
    return 2.0 ** -60


def weighted_norms(u: FieldSeries, regime: str, q) -> dict:
    """Time-weighted norms used by the critical regimes.

    Nodes at t = 0 are excluded from every weighted supremum (open endpoint).
    Returns sup_t t^(1/2) E^inf, sup_t t^(1/4) E^6, sup_t E^3, and the per-cube
    weighted variants ||t^a u||_{E^(inf,p)_{T,.}} with a = (p-3)/(2p).
    """
    if regime not in REGIMES:
        raise DomainError(f"regime must be one of {REGIMES}")
    q = as_exponent(q)
    if regime == "CRITICAL_DECAY":
        q6 = 1.0 / (recip(q) - 1.0 / 6.0)
        qinf = 1.0 / (recip(q) - 1.0 / 3.0) if recip(q) > 1.0 / 3.0 else INF
    else:
        q6 = qinf = q
    t = u.times
    pos = [(tt, f) for tt, f in zip(t, u.fields) if tt > 0]

    def wsup(a, p, qq):
        vals = [tt ** a * amalgam_norm(f, p, qq) for tt, f in pos]
        return max(vals) if vals else 0.0

    def wespq(a, p, qq):
        # per-cube sup over t > 0 of t^a (per-cube L^p), then l^q over cubes
        stacks = [tt ** a * cube_norms(f, p) for tt, f in pos]
        if not stacks:
            return 0.0
        per_cube = np.maximum.reduce(stacks)
        flat = per_cube.ravel()
        if math.isinf(qq):
            return float(flat.max())
        return float(np.sum(flat ** qq) ** (1.0 / qq))

    return {
        "sup_E3": max((amalgam_norm(f, 3.0, q) for f in u.fields), default=0.0),
        "sup_t12_Einf": wsup(0.5, INF, qinf),
        "sup_t14_E6": wsup(0.25, 6.0, q6),
        "wespq_t14_p6": wespq(0.25, 6.0, q6),
        "wespq_t12_pinf": wespq(0.5, INF, qinf),
        "q6": q6,
        "qinf": qinf,
    }


@dataclass(frozen=True)
class RegularizedConfig:
    """Mollification/cutoff scale for the regularized advection term.

    The mollifier is the standard radial bump supported in the unit ball,
    scaled to eps and normalised to unit discrete sum; the cutoff is a radial
    non-increasing profile equal to 1 on the unit ball and supported in the
    3/2 ball, evaluated at eps * x.
    """

    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise DomainError("the mollification scale must lie in (0, 1)")


def mollifier_field(spec: GridSpec, eps: float) -> np.ndarray:
    """Displacement samples of the scaled bump, unit discrete integral.

    Indexed by grid displacement with the origin at index 0 (wrap-around
    ordering), ready for FFT convolution.
    """
    rsq = 0.0
    for a in range(spec.d):
        n = spec.cells[a]
        L = spec.sides[a]
        disp = (np.arange(n) * spec.h + L / 2.0) % L - L / 2.0
        shape = [1] * spec.d
        shape[a] = n
        rsq = rsq + disp.reshape(shape) ** 2
    u = np.broadcast_to(rsq / (eps * eps), spec.cells)
    out = np.where(u < 1.0, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
    total = out.sum() * spec.cell_volume
    if total <= 0:
        raise ResolutionError("mollifier not resolved on this grid")
    return out / total


def mollify(f: GridField, eps: float) -> GridField:
    """Periodic convolution with the eps-scaled unit-mass bump."""
    eta = mollifier_field(f.spec, eps)
    axes = tuple(range(1, f.spec.d + 1))
    eta_hat = np.fft.fftn(eta) * f.spec.cell_volume
    fhat = np.fft.fftn(f.samples, axes=axes) * eta_hat
    return GridField(f.spec, np.fft.ifftn(fhat, axes=axes).real)


def cutoff_field(spec: GridSpec, eps: float) -> np.ndarray:
    """Radially non-increasing cutoff at scale 1/eps: 1 on |eps x| <= 1,
    smooth descent to 0 at |eps x| = 3/2."""
    coords = spec.coord_arrays()
    r = np.sqrt(sum(np.asarray(c) ** 2 for c in coords)) * eps
    s = np.clip((r - 1.0) * 2.0, 0.0, 1.0)
    return np.broadcast_to(1.0 - s * s * (3.0 - 2.0 * s), spec.cells).copy()


@dataclass
class RegularizedResult:
    u: FieldSeries
    grad_u: FieldSeries
    trace: PicardTrace
    admissible_window: float
    within_window: bool
    caloric_le_norm: float
    le_norm: float
    C0: float


def regularized_solve(
    u0: GridField,
    rcfg: RegularizedConfig,
    T: float,
    q: float = 1.5,
    n_steps: int = 8,
    tol: float = 1e-8,
    cap: int = 30,
) -> RegularizedResult:
    """Solve the mollified/cutoff fixed-point equation in the LE_q norm.

    The admissible horizon is min(1, c eps^3 / B^2) with B the E^2_q size of
    the data and c = 1/64; a longer T is attempted anyway and simply reported
    as outside the window (non-convergence there is expected, not an error).
    """
    if u0.m != u0.spec.d:
        raise PreconditionError("initial data must have d components")
    if divergence_max(u0) > 1e-10:
        raise PreconditionError("initial data is not divergence-free (spectral check)")
    q = as_exponent(q)
    B = amalgam_norm(u0, 2.0, q)
    window = min(1.0, REGULARIZED_WINDOW_FACTOR * rcfg.eps ** 3 / B ** 2) if B > 0 else 1.0
    times = dyadic_times(T, n_steps)
    caloric = _caloric_series(u0, times)
    cut = cutoff_field(u0.spec, rcfg.eps)

    def tensor(series: FieldSeries) -> FieldSeries:
        ws = workspace_for(series.spec)
        d = series.spec.d
        axes = tuple(range(1, d + 1))
        fields = []
        for f in series.fields:
            mol = mollify(f, rcfg.eps).samples
            loc = f.samples * cut
            prod = np.stack([mol[l] * loc[j] for l in range(d) for j in range(d)])
            phat = np.fft.fftn(prod, axes=axes) * ws.dealias
            fields.append(GridField(series.spec, np.fft.ifftn(phat, axes=axes).real))
        return FieldSeries(series.times, fields, series.weights)

    def le(series: FieldSeries):
        grads = series.map(gradient)
        return local_energy_norm(series, grads, q), grads

    trace = PicardTrace(norm_label=f"LE_{q:g}")
    caloric_le, _ = le(caloric)
    u = caloric
    trace.iterate_norms.append(caloric_le)
    scale = max(caloric_le, 1e-300)
    grads = None
    for _ in range(cap):
        trace.iterations += 1
        u_next = series_combine(caloric, duhamel_series(tensor(u)), 1.0, -1.0)
        diff, _ = le(series_combine(u_next, u, 1.0, -1.0))
        trace.diff_norms.append(diff)
        nrm, grads = le(u_next)
        trace.iterate_norms.append(nrm)
        u = u_next
        if diff <= tol * scale:
            trace.converged = True
            break
        if not math.isfinite(diff) or diff > 1e6 * scale:
            break
    residual = series_combine(
        u, series_combine(caloric, duhamel_series(tensor(u)), 1.0, -1.0), 1.0, -1.0
    )
    trace.final_residual, _ = le(residual)
    if grads is None:
        grads = u.map(gradient)
    le_norm, grads = le(u)
    C0 = caloric_le / B if B > 0 else 0.0
    return RegularizedResult(
        u=u,
        grad_u=grads,
        trace=trace,
        admissible_window=window,
        within_window=T <= window,
        caloric_le_norm=caloric_le,
        le_norm=le_norm,
        C0=C0,
    )


def apriori_quantities(u0: GridField, q, R: float, lambda0: float = LAMBDA0) -> dict:
    """Scale-R lattice energy sums of the data.

    N0_qR = (1/R) || int_{B_R(kR)} |u0|^2 ||_{l^(q/2) over the R-lattice},
    A0q = R N0_qR, N0_R the lattice supremum version, and
    lambda_R = min(lambda0, lambda0 R^2, lambda0 R^2 / A0q^2).
    """
    q = as_exponent(q)
    spec = u0.spec
    ratio = R * spec.per_unit
    if R <= 0 or abs(ratio - round(ratio)) > 1e-9:
        raise AlignmentError(f"R = {R} is not a positive multiple of the cell size")
    mag2 = u0.magnitude() ** 2
    coords = spec.coord_arrays()
    los, his = spec.box_lo, spec.box_hi
    k_ranges = [
        np.arange(math.floor(lo / R) - 1, math.ceil(hi / R) + 2)
        for lo, hi in zip(los, his)
    ]
    masses = []
    for idx in np.ndindex(*[r.size for r in k_ranges]):
        center = [k_ranges[a][idx[a]] * R for a in range(spec.d)]
        dist_sq = sum((np.asarray(coords[a]) - center[a]) ** 2 for a in range(spec.d))
        m = float(np.sum(mag2, where=np.broadcast_to(dist_sq < R * R, mag2.shape)) * spec.cell_volume)
        if m > 0:
            masses.append(m)
    masses = np.array(masses) if masses else np.zeros(1)
    if math.isinf(q):
        n0_q = float(masses.max()) / R
    else:
        n0_q = float(np.sum(masses ** (q / 2.0)) ** (2.0 / q)) / R
    n0_sup = float(masses.max()) / R
    a0q = R * n0_q
    lam = min(lambda0, lambda0 * R * R)
    if a0q > 0:
        lam = min(lam, lambda0 * R * R / a0q ** 2)
    return {"N0_qR": n0_q, "N0_R": n0_sup, "A0q": a0q, "lambda_R": lam, "R": R, "q": q, "lambda0": lambda0}
