"""Verification scenarios: saturating data, measurements, and verdicts.

Each scenario measures a quantity whose behaviour the estimate library
predicts (a decay exponent, a growth envelope, an invariance, an exact
identity) and issues PASS, FAIL, or NOT_APPLICABLE.  Upper bounds are always
verified as ratio flatness across a time or scale grid, never as absolute
constants; sharp rates are verified by fitting log-log slopes on data
families chosen to saturate them.  Whenever a law's hypotheses fail for the
requested parameters the scenario reports NOT_APPLICABLE naming the violated
condition instead of passing silently.

Every run is reproducible bit-for-bit from (seed, params), both of which are
embedded in the returned report.
"""

from __future__ import annotations

import math

import numpy as np

from .constructions import (
    BubbleTrainSpec,
    default_bubble_grid,
    gen_bubble_train,
    gen_divfree_random,
    gen_moving_bump,
    gen_strict_inclusion,
    sample_delta_train,
    verify_bubble_blowup,
)
from .grid import (
    INF,
    DomainError,
    FieldSeries,
    GridField,
    GridSpec,
    as_exponent,
    recip,
    series_combine,
)
from .kernels import eval_kernel, kernel_amalgam_bound
from .norms import NormSpec, amalgam_norm, cube_norms, local_energy_norm, spacetime_norm
from .report import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    VerifyReport,
    fit_exponent,
    flatness_verdict,
    slope_verdict,
)
from .solver import (
    SolverConfig,
    apriori_quantities,
    picard_solve,
    regularized_solve,
    RegularizedConfig,
    subcritical_timescale,
    weighted_norms,
)
from .spectral import (
    bilinear_series,
    divergence_max,
    duhamel_series,
    gradient,
    heat_evolve,
    oseen_apply,
    outer_product_series,
    translate,
)

FLATNESS_RATIO = 3.0


# ---------------------------------------------------------------------------
# data factories


def gaussian_bump(spec: GridSpec, sigma: float, center=None, amplitude: float = 1.0) -> GridField:
    if center is None:
        center = [0.0] * spec.d
    coords = spec.coord_arrays()
    rsq = sum((np.asarray(coords[a]) - center[a]) ** 2 for a in range(spec.d))
    return GridField(spec, (amplitude * np.exp(-np.broadcast_to(rsq, spec.cells) / (2.0 * sigma * sigma)))[None])


def bump_train(spec: GridSpec, positions, sigma: float, coefficients=None) -> GridField:
    out = np.zeros(spec.cells)
    coords = spec.coord_arrays()
    for i, pos in enumerate(positions):
        c = 1.0 if coefficients is None else coefficients[i]
        center = [pos] + [0.0] * (spec.d - 1)
        rsq = sum((np.asarray(coords[a]) - center[a]) ** 2 for a in range(spec.d))
        out += c * np.exp(-np.broadcast_to(rsq, spec.cells) / (2.0 * sigma * sigma))
    return GridField(spec, out[None])


def tensor_bump(spec: GridSpec, sigma: float, slot=(0, 1), amplitude: float = 1.0) -> GridField:
    """d*d tensor field with one Gaussian component in the given (l, j) slot."""
    d = spec.d
    base = gaussian_bump(spec, sigma, amplitude=amplitude).samples[0]
    comps = np.zeros((d * d,) + spec.cells)
    comps[slot[0] * d + slot[1]] = base
    return GridField(spec, comps)


def curl_bump(spec: GridSpec, sigma: float = 0.15, amplitude: float = 1.0) -> GridField:
    """Compactly concentrated exactly divergence-free 3-d field: curl(0,0,psi)."""
    if spec.d != 3:
        raise DomainError("curl_bump is three-dimensional")
    x, y, z = spec.coord_arrays()
    rsq = x ** 2 + y ** 2 + z ** 2
    psi = np.exp(-rsq / (2.0 * sigma * sigma))
    ux = np.broadcast_to(-(y / (sigma * sigma)) * psi, spec.cells)
    uy = np.broadcast_to((x / (sigma * sigma)) * psi, spec.cells)
    uz = np.zeros(spec.cells)
    return GridField(spec, amplitude * np.stack([ux, uy, uz]))


def dyadic_t_grid(lo_exp: float, hi_exp: float, per_octave: int = 2) -> np.ndarray:
    n = int(round((hi_exp - lo_exp) * per_octave))
    return 2.0 ** (lo_exp + np.arange(n + 1) / per_octave)


def graded_times(T: float, n: int = 16) -> np.ndarray:
    """Quadratically graded nodes on [0, T], dense near t = 0."""
    return T * (np.arange(n + 1) / n) ** 2


# ---------------------------------------------------------------------------
# decay scenarios


def scenario_decay(params: dict, seed: int = 0) -> VerifyReport:
    """Fitted decay exponent of an evolved family against the envelope rate.

    SMALL_T uses a single bump whose width tracks sqrt(t) (a fixed narrow
    bump when the source exponent is 1), which saturates the local term of
    the semigroup envelope; LARGE_T uses a widely spaced equal-bump train,
    which saturates the decay term only for source sum exponent 1, so other
    choices are reported without a verdict.
    """
    d = int(params["d"])
    pt, p = as_exponent(params["pt"]), as_exponent(params["p"])
    qt, q = as_exponent(params.get("qt", pt)), as_exponent(params.get("q", p))
    h = int(params.get("h", 0))
    kind = params.get("kind", "heat")
    regime = params.get("regime", "SMALL_T")
    tol = float(params.get("tol", 0.15))
    per_octave = int(params.get("per_octave", 2))
    if pt > p or qt > q:
        raise DomainError("need source exponents below target exponents (pt <= p, qt <= q)")

    report = VerifyReport(
        scenario=params.get("id", f"decay-{kind}-{regime.lower()}"),
        params=dict(params),
        seed=seed,
        tolerance=tol,
    )

    if regime == "SMALL_T":
        lo_exp, hi_exp = params.get("t_window", (-6, -3))
        ts = dyadic_t_grid(lo_exp, hi_exp, per_octave)
        if kind == "oseen":
            if d != 3:
                raise DomainError("the evolve-project-divergence decay scenario runs at d = 3")
            side, per_unit = params.get("box_side", 4), params.get("per_unit", 16)
        else:
            side = params.get("box_side", 4)
            per_unit = params.get("per_unit", 256 if d == 1 else 128)
        grid = GridSpec.centered(d, int(side), int(per_unit))
        predicted = -(d / 2.0) * (recip(pt) - recip(p)) - (0.5 if kind == "oseen" else h / 2.0)
        pairs = []
        for t in ts:
            sigma = 4.0 * grid.h if pt == 1.0 else max(math.sqrt(t), 2.0 * grid.h)
            if kind == "oseen":
                data = tensor_bump(grid, sigma)
                out = oseen_apply(data, float(t))
            else:
                data = gaussian_bump(grid, sigma)
                out = heat_evolve(data, float(t), h=h)
            denom = amalgam_norm(data, pt, qt)
            pairs.append((float(t), amalgam_norm(out, p, q) / denom))
        fit = fit_exponent(pairs)
        report.add_curve("ratio", pairs)
        report.add_fit("ratio", fit)
        report.predicted = {"slope": predicted}
        report.measured = {"slope": fit.slope, "max_rel_residual": fit.max_rel_residual}
        report.prediction = (
            "semigroup amalgam decay, local term -(d/2)(1/pt-1/p) - h/2"
            if kind == "heat"
            else "evolve-project-divergence decay, local term -(d/2)(1/pt-1/p) - 1/2"
        )
        report.verdict = slope_verdict(fit, predicted, tol)
        return report

    if regime == "LARGE_T":
        lo_exp, hi_exp = params.get("t_window", (1, 4))
        ts = dyadic_t_grid(lo_exp, hi_exp, per_octave)
        side, per_unit = params.get("box_side", 104), params.get("per_unit", 16)
        grid = GridSpec.centered(d, int(side), int(per_unit))
        spacing, count = 16.0, 4
        positions = [spacing * (i - (count - 1) / 2.0) for i in range(count)]
        data = bump_train(grid, positions, sigma=0.25)
        denom = amalgam_norm(data, pt, qt)
        pairs = []
        for t in ts:
            out = heat_evolve(data, float(t), h=h)
            pairs.append((float(t), amalgam_norm(out, p, q) / denom))
        fit = fit_exponent(pairs)
        report.add_curve("ratio", pairs)
        report.add_fit("ratio", fit)
        predicted = -(d / 2.0) * (recip(qt) - recip(q)) - h / 2.0
        report.predicted = {"slope": predicted}
        report.measured = {"slope": fit.slope, "max_rel_residual": fit.max_rel_residual}
        report.prediction = "semigroup amalgam decay, large-time term -(d/2)(1/qt-1/q) - h/2"
        saturating = qt == 1.0 and q <= p
        if not saturating:
            report.verdict = NOT_APPLICABLE
            report.notes = (
                "equal-bump trains saturate the decay term only for qt = 1 with "
                "q <= p; measurement reported without a verdict"
            )
        else:
            report.verdict = slope_verdict(fit, predicted, tol)
        return report

    raise DomainError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# kernel norm envelopes


def _kernel_cube_norm_map(kind: str, t: float, d: int, p: float) -> np.ndarray:
    """Per-cube L^p norms of a kernel on a composite of nested grids.

    A wide coarse grid captures the tail sum; a mid grid refines the first
    ring of cubes and a fine grid the centre cube, where the kernel peaks at
    scale sqrt(t).  All grids are centred and odd-sided, so the refined
    blocks splice into the wide per-cube array by index.
    """
    eval_kind = kind if kind != "heat_grad" else "grad_heat"

    def norms_on(spec: GridSpec) -> np.ndarray:
        return cube_norms(eval_kernel(eval_kind, t, spec), p)

    wide_half = max(12, math.ceil(8.0 * math.sqrt(t)))
    n_wide = 2 if t < 4.0 else 1
    wide = norms_on(GridSpec.centered(d, 2 * wide_half + 1, n_wide))
    ring = norms_on(GridSpec.centered(d, 3, 8))
    c = wide_half  # centre cube index along each axis
    wide[tuple(slice(c - 1, c + 2) for _ in range(d))] = ring
    if t < 1.0:
        n_fine = min(128, max(16, 2 ** math.ceil(math.log2(6.0 / math.sqrt(t)))))
        fine = norms_on(GridSpec.centered(d, 1, n_fine))
        wide[tuple(c for _ in range(d))] = fine.reshape(())
    return wide


def measured_kernel_norm(kind: str, t: float, d: int, p, q) -> float:
    p, q = as_exponent(p), as_exponent(q)
    vals = _kernel_cube_norm_map(kind, t, d, p).ravel()
    if math.isinf(q):
        return float(vals.max())
    return float(np.sum(vals ** q) ** (1.0 / q))


def _sharp_branch_bound(kind: str, t: float, p, q, d: int, h: int) -> float:
    """The active branch of the envelope: spatial term below t = 1, decay
    term at and above.  The branches cross at t = 1 where both equal the
    derivative prefactor, and each is the sharp rate in its own regime."""
    rp = recip(p) if t < 1.0 else recip(q)
    pref = t ** (-h / 2.0) if kind in ("heat", "heat_grad") else t ** -0.5
    return float(pref * t ** (-d / 2.0 + d * rp / 2.0))


def scenario_kernel_norms(params: dict, seed: int = 0) -> VerifyReport:
    """Kernel amalgam norms against their envelope.

    Two checks per (d, p, q):

    * one-sided: measured / (two-term sum envelope) stays below one constant
      over the whole window [2^-10, 2^6] (the envelope is an upper bound with
      implicit constant, so only boundedness is claimed there);
    * two-sided: on the asymptotic windows [2^-10, 2^-5] and [2^2, 2^6] the
      measured-to-active-branch ratio is flat within the stated factor.

    The crossover octaves around t = 1 are excluded from the flatness check:
    there the exact norms interpolate between the branches non-polynomially
    (for the heat kernel, the E^1_oo norm equals erf(1/(4 sqrt(t)))^d, which
    dips a factor ~7 below the branch levels at d = 3), so no constant makes
    a two-term power envelope two-sidedly flat through t ~ 1.
    """
    kind = params.get("kind", "heat")
    h = int(params.get("h", 1 if kind == "heat_grad" else 0))
    dims = params.get("dims", (1, 2, 3))
    exps = params.get("pq_values", (1.0, 2.0, INF))
    max_ratio = float(params.get("max_ratio", FLATNESS_RATIO))
    bound_cap = float(params.get("bound_cap", 8.0))
    bound_kind = "heat" if kind in ("heat", "heat_grad") else "phi"
    small_exps = tuple(params.get("small_exps", range(-10, -4)))
    large_exps = tuple(params.get("large_exps", range(2, 7)))
    mid_exps = (-4, -2, 0, 1)
    all_t = sorted({2.0 ** e for e in (*small_exps, *mid_exps, *large_exps)})

    report = VerifyReport(
        scenario=params.get("id", f"kernel-norms-{kind}"),
        params=dict(params),
        seed=seed,
        tolerance=max_ratio,
        prediction="kernel amalgam norm envelope t^(-h/2)(t^(-d/2+d/2p) + [t>=1] t^(-d/2+d/2q)): "
        "bounded above everywhere, branch-flat on the asymptotic windows",
    )
    worst = 0.0
    sum_ratio_max = 0.0
    all_ok = True
    for d in dims:
        cache = {}
        for p in exps:
            for t in all_t:
                cache[(p, t)] = _kernel_cube_norm_map(kind, t, int(d), as_exponent(p))
        for p in exps:
            for q in exps:
                pairs = []
                for t in all_t:
                    vals = cache[(p, t)].ravel()
                    if math.isinf(as_exponent(q)):
                        measured = float(vals.max())
                    else:
                        measured = float(np.sum(vals ** as_exponent(q)) ** recip(q))
                    pairs.append((t, measured / _sharp_branch_bound(kind, t, p, q, int(d), h)))
                    sum_bound = kernel_amalgam_bound(bound_kind, t, p, q, int(d), h=h)
                    sum_ratio_max = max(sum_ratio_max, measured / sum_bound)
                name = f"d{d}_p{p:g}_q{q:g}".replace("inf", "oo")
                report.add_curve(name, pairs)
                for window in (small_exps, large_exps):
                    lo, hi = 2.0 ** min(window), 2.0 ** max(window)
                    ratios = [v for t, v in pairs if lo * 0.999 <= t <= hi * 1.001]
                    spread = max(ratios) / min(ratios) if min(ratios) > 0 else math.inf
                    worst = max(worst, spread)
                    if flatness_verdict(ratios, max_ratio) != PASS:
                        all_ok = False
    report.measured = {"worst_branch_spread": worst, "sum_envelope_ratio_max": sum_ratio_max}
    report.verdict = PASS if (all_ok and sum_ratio_max <= bound_cap) else FAIL
    return report


# ---------------------------------------------------------------------------
# scale invariance of the critical spacetime bound


_SHAPES = {
    "gauss": lambda x: np.exp(-8.0 * x ** 2),
    "plateau": lambda x: 1.0 / (1.0 + np.exp(np.clip((np.abs(x) - 0.25) / 0.05, -60.0, 60.0))),
    "twin": lambda x: np.exp(-24.0 * (x - 0.2) ** 2) + 0.5 * np.exp(-12.0 * (x + 0.3) ** 2),
}


def scenario_scale_invariance(params: dict, seed: int = 0) -> VerifyReport:
    """Parabolic-rescaling invariance of the L^s_t L^p smoothing bound.

    Requires 1 < r <= s <= inf, r <= p < inf and the scale relation
    2/s + d/p = d/r; violations raise a domain error.  For each data shape
    the time-integrated norm ratio must agree across the rescalings within
    the stated tolerance.
    """
    d = int(params.get("d", 1))
    r, s, p = as_exponent(params["r"]), as_exponent(params["s"]), as_exponent(params["p"])
    lambdas = params.get("lambdas", (1.0, 2.0, 4.0))
    shapes = params.get("shapes", ("gauss", "plateau", "twin"))
    tol = float(params.get("tol", 0.05))
    if not (1 < r <= s and r <= p and not math.isinf(p)):
        raise DomainError("need 1 < r <= s <= inf and r <= p < inf")
    if abs(2.0 * recip(s) + d * recip(p) - d * recip(r)) > 1e-9:
        raise DomainError("scaling relation 2/s + d/p = d/r violated")
    if d != 1:
        raise DomainError("the invariance scenario runs on 1-d data")

    grid = GridSpec.centered(1, int(params.get("box_side", 128)), int(params.get("per_unit", 128)))
    t_hi = float(params.get("t_hi", 2.0 ** 6))
    ts = np.concatenate(([0.0], np.geomspace(2.0 ** -16, t_hi, 90)))

    report = VerifyReport(
        scenario=params.get("id", "scale-invariance"),
        params=dict(params),
        seed=seed,
        tolerance=tol,
        prediction="time-integrated smoothing norm is invariant under parabolic rescaling "
        "lam^(d/r) a(lam x) when 2/s + d/p = d/r",
    )
    x = grid.axis_coords(0)
    agree_all = True
    for shape in shapes:
        fn = _SHAPES[shape]
        ratios = []
        for lam in lambdas:
            a = GridField(grid, (lam ** (d * recip(r)) * fn(lam * x))[None])
            norms = [amalgam_norm(heat_evolve(a, float(t)), p, p) for t in ts]
            integral = np.trapezoid(np.array(norms) ** s, ts) ** recip(s)
            ratios.append(integral / amalgam_norm(a, r, r))
        spread = max(ratios) / min(ratios) - 1.0
        report.measured[f"{shape}_spread"] = spread
        report.measured[f"{shape}_ratio"] = ratios[0]
        report.add_curve(f"{shape}_ratio_vs_lambda", list(zip(lambdas, ratios)))
        if spread > tol:
            agree_all = False
    family = [report.measured[f"{s_}_ratio"] for s_ in shapes]
    report.measured["family_spread"] = max(family) / min(family)
    report.verdict = PASS if agree_all else FAIL
    return report


# ---------------------------------------------------------------------------
# spacetime integral estimates


def _heat_series(f: GridField, T: float, n: int = 16) -> FieldSeries:
    times = graded_times(T, n)
    return FieldSeries(times, [heat_evolve(f, float(t)) for t in times])


def _espq_train(grid: GridSpec, q: float) -> GridField:
    half = int(min(-grid.box_lo[0], grid.box_hi[0]) - 26)
    sites = np.arange(-half, half + 1, 2.0)
    coeffs = [(1.0 + abs(s)) ** -(recip(q) + 0.35) for s in sites]
    return bump_train(grid, sites.tolist(), sigma=0.3, coefficients=coeffs)


def scenario_spacetime(params: dict, seed: int = 0) -> VerifyReport:
    """Spacetime integral estimates: ratio flatness of LHS/RHS across T.

    law = heat_espq      per-cube-in-time amalgam bound for the heat flow
    law = heat_lsepm     time-Lebesgue amalgam bound, including the global
                         parameter families where the T = infinity estimate
                         holds; parameters outside them yield NOT_APPLICABLE
    law = duhamel_espq   bound for the evolve-project-divergence integral
    law = local_energy   l^q local energy bounds for heat and Duhamel parts
    """
    law = params.get("law", "heat_espq")
    if law in ("heat_espq", "heat_lsepm"):
        return _scenario_heat_spacetime(params, seed, law)
    if law == "duhamel_espq":
        return _scenario_duhamel_spacetime(params, seed)
    if law == "local_energy":
        return _scenario_local_energy(params, seed)
    raise DomainError(f"unknown law {law!r}")


def _scenario_heat_spacetime(params: dict, seed: int, law: str) -> VerifyReport:
    d = int(params.get("d", 1))
    r, q = as_exponent(params["r"]), as_exponent(params["q"])
    s, p, m = as_exponent(params["s"]), as_exponent(params["p"]), as_exponent(params["m"])
    Ts = list(params.get("Ts", (0.25, 1.0, 4.0, 16.0)))
    max_ratio = float(params.get("max_ratio", FLATNESS_RATIO))
    report = VerifyReport(
        scenario=params.get("id", f"spacetime-{law}"),
        params=dict(params),
        seed=seed,
        tolerance=max_ratio,
    )

    violated = None
    if not 1 < r <= s:
        violated = "1 < r <= s"
    elif not (r <= p and not math.isinf(p)):
        violated = "r <= p < inf"
    elif abs(2 * recip(s) + d * recip(p) - d * recip(r)) > 1e-9:
        violated = "2/s + d/p = d/r"
    elif not q <= m:
        violated = "q <= m"
    if violated:
        report.verdict = NOT_APPLICABLE
        report.notes = f"hypothesis violated: {violated}"
        return report

    alpha = d / 2.0 * recip(m) - d / 2.0 * recip(q) + recip(s)
    uniform = alpha < 0 or (abs(alpha) < 1e-12 and 1 < q < m and not math.isinf(m))
    if law == "heat_lsepm":
        in_E1 = q <= r <= s <= p <= m and s != m and r != p
        thresh = d * s / (d + 2.0)
        in_E2 = s < m and (q < thresh - 1e-12 or (abs(q - thresh) <= 1e-12 and q > 1))
        global_ok = (m <= s and uniform) or in_E1 or in_E2
        if q > s:
            report.verdict = NOT_APPLICABLE
            report.notes = "time-Lebesgue control requires q <= s (indicator factor)"
            return report
    else:
        global_ok = uniform

    if global_ok:
        Ts = Ts + [64.0]
    margin = math.ceil(6.0 * math.sqrt(max(Ts)))
    side = int(params.get("box_side", 2 * (margin + 28)))
    grid = GridSpec.centered(d, side, int(params.get("per_unit", 8)))
    f = _espq_train(grid, q)
    denom = amalgam_norm(f, r, q)

    beta = alpha if (alpha >= 0 and 1 < q < m and not math.isinf(m)) else max(alpha, 0.0) + 0.05
    pairs = []
    for T in Ts:
        series = _heat_series(f, T, n=int(params.get("n_times", 16)))
        if law == "heat_espq":
            lhs = spacetime_norm(series, NormSpec("ESPQ", (s, p, m)))
        else:
            lhs = spacetime_norm(series, NormSpec("LS_EPQ", (s, p, m)))
        rhs = denom if global_ok else (1.0 + T ** beta) * denom
        pairs.append((T, lhs / rhs))
    report.add_curve("ratio", pairs)
    report.predicted = {"alpha": alpha, "beta": beta, "T_uniform": global_ok}
    report.prediction = (
        "heat flow spacetime amalgam bound <= C (1 + T^beta) ||f||, T-uniform "
        "when the growth exponent is nonpositive or the global parameter "
        "families apply"
    )
    if law == "heat_lsepm" and not global_ok:
        report.verdict = NOT_APPLICABLE
        report.notes = (
            "parameters sit in the unresolved family q <= s < m outside the "
            "global sets; growth measured without a verdict"
        )
        return report
    ratios = [v for _, v in pairs]
    report.measured = {"ratio_spread": max(ratios) / min(ratios)}
    report.verdict = flatness_verdict(ratios, max_ratio)
    return report


def _scenario_duhamel_spacetime(params: dict, seed: int) -> VerifyReport:
    s, p, m = as_exponent(params.get("s", 4)), as_exponent(params.get("p", 6)), as_exponent(params.get("m", 2))
    Ts = list(params.get("Ts", (0.25, 1.0, 4.0, 16.0)))
    max_ratio = float(params.get("max_ratio", FLATNESS_RATIO))
    report = VerifyReport(
        scenario=params.get("id", "spacetime-duhamel"),
        params=dict(params),
        seed=seed,
        tolerance=max_ratio,
        prediction="Duhamel tensor bound: per-cube spacetime norm grows at most like 1 + T^(1-1/s)",
    )
    st, pt, mt = s / 2.0, p / 2.0, m if m <= 2 else m / 2.0
    sigma_exp = 0.5 - 1.5 * (recip(pt) - recip(p)) - (recip(st) - recip(s))
    if sigma_exp < -1e-9:
        report.verdict = NOT_APPLICABLE
        report.notes = "hypothesis violated: 1/2 - (3/2)(1/pt - 1/p) - (1/st - 1/s) >= 0"
        return report
    grid = GridSpec.centered(3, int(params.get("box_side", 32)), int(params.get("per_unit", 1)))
    u0 = gen_divfree_random(seed, grid, float(params.get("amplitude", 0.5)), norm_p=2, norm_q=2, kcut_frac=0.15)
    pairs = []
    for T in Ts:
        u = _heat_series(u0, T, n=int(params.get("n_times", 12)))
        F = outer_product_series(u, u)
        lhs = spacetime_norm(duhamel_series(F), NormSpec("ESPQ", (s, p, m)))
        rhs_norm = spacetime_norm(F, NormSpec("ESPQ", (st, pt, mt)))
        rhs = (1.0 + T ** (1.0 - recip(s))) * rhs_norm
        pairs.append((T, lhs / rhs))
    report.add_curve("ratio", pairs)
    ratios = [v for _, v in pairs]
    report.measured = {"ratio_spread": max(ratios) / min(ratios)}
    report.verdict = flatness_verdict(ratios, max_ratio)
    return report


def _scenario_local_energy(params: dict, seed: int) -> VerifyReport:
    q = as_exponent(params.get("q", 1.5))
    beta = float(params.get("beta", 0.1))
    Ts = list(params.get("Ts", (0.25, 1.0, 4.0, 16.0)))
    max_ratio = float(params.get("max_ratio", FLATNESS_RATIO))
    report = VerifyReport(
        scenario=params.get("id", "local-energy-bounds"),
        params=dict(params),
        seed=seed,
        tolerance=max_ratio,
        prediction="l^q local energy of the heat flow (resp. Duhamel term) bounded by "
        "(1 + T^beta) times the data (resp. tensor) norm for any beta > 0",
    )
    grid = GridSpec.centered(3, int(params.get("box_side", 32)), int(params.get("per_unit", 1)))
    f = gen_divfree_random(seed, grid, float(params.get("amplitude", 1.0)), norm_p=2, norm_q=q, kcut_frac=0.15)
    denom = amalgam_norm(f, 2, q)
    heat_pairs, duh_pairs = [], []
    for T in Ts:
        u = _heat_series(f, T, n=int(params.get("n_times", 12)))
        gu = u.map(gradient)
        lhs = local_energy_norm(u, gu, q)
        heat_pairs.append((T, lhs / ((1.0 + T ** beta) * denom)))
        F = outer_product_series(u, u)
        LF = duhamel_series(F)
        gLF = LF.map(gradient)
        rhsF = spacetime_norm(F, NormSpec("ESPQ", (2, 2, q)))
        duh_pairs.append((T, local_energy_norm(LF, gLF, q) / ((1.0 + T ** beta) * rhsF)))
    report.add_curve("heat_ratio", heat_pairs)
    report.add_curve("duhamel_ratio", duh_pairs)
    hr = [v for _, v in heat_pairs]
    dr = [v for _, v in duh_pairs]
    report.measured = {
        "heat_spread": max(hr) / min(hr),
        "duhamel_spread": max(dr) / min(dr),
    }
    ok = flatness_verdict(hr, max_ratio) == PASS and flatness_verdict(dr, max_ratio) == PASS
    report.verdict = PASS if ok else FAIL
    return report


# ---------------------------------------------------------------------------
# continuity and vanishing


def scenario_continuity(params: dict, seed: int = 0) -> VerifyReport:
    """Translation continuity, strong continuity at t = 0 and t > 0, and the
    weighted vanishing of the heat flow; all on smooth compact data."""
    p, q = as_exponent(params.get("p", 2)), as_exponent(params.get("q", 2))
    pt = as_exponent(params.get("pt", 2))
    p_hi = as_exponent(params.get("p_hi", 4))
    grid = GridSpec.centered(1, int(params.get("box_side", 16)), int(params.get("per_unit", 64)))
    f = gaussian_bump(grid, 0.5)
    report = VerifyReport(
        scenario=params.get("id", "continuity-vanishing"),
        params=dict(params),
        seed=seed,
        tolerance=float(params.get("tol", 0.6)),
        prediction="translation and semigroup continuity in the amalgam norm; "
        "weighted norm t^((d/2)(1/pt-1/p_hi)) of the flow vanishes at t = 0",
    )

    taus = [2.0 ** -j for j in range(0, 9)]
    shift_vals = [
        (tau, amalgam_norm(GridField(grid, translate(f, [tau]).samples - f.samples), p, q))
        for tau in taus
    ]
    ts = [2.0 ** -j for j in range(2, 13)]
    heat0_vals = [
        (t, amalgam_norm(GridField(grid, heat_evolve(f, t).samples - f.samples), p, q)) for t in ts
    ]
    t1 = 0.5
    base = heat_evolve(f, t1)
    cont_vals = [
        (dt, amalgam_norm(GridField(grid, heat_evolve(f, t1 + dt).samples - base.samples), p, q))
        for dt in ts
    ]
    sig = (grid.d / 2.0) * (recip(pt) - recip(p_hi))
    # start the weighted window past the hump where t is comparable to the
    # squared data width; the vanishing claim concerns t -> 0
    ts_w = [2.0 ** -j for j in range(4, 15)]
    wvals = [(t, t ** sig * amalgam_norm(heat_evolve(f, t), p_hi, q)) for t in ts_w]

    report.add_curve("translation_diff", shift_vals)
    report.add_curve("heat_diff_t0", heat0_vals)
    report.add_curve("heat_diff_t1", cont_vals)
    report.add_curve("weighted_flow", wvals)

    def vanishes(pairs, factor):
        vals = [v for _, v in pairs]
        mono = all(vals[i + 1] <= vals[i] * 1.02 for i in range(len(vals) - 1))
        return mono and vals[-1] <= factor * vals[0]

    ok = (
        vanishes(shift_vals, 0.05)
        and vanishes(heat0_vals, 0.05)
        and vanishes(cont_vals, 0.05)
        and vanishes(wvals, report.tolerance)
    )
    report.measured = {
        "translation_last_over_first": shift_vals[-1][1] / shift_vals[0][1],
        "heat0_last_over_first": heat0_vals[-1][1] / heat0_vals[0][1],
        "cont_last_over_first": cont_vals[-1][1] / cont_vals[0][1],
        "weighted_last_over_first": wvals[-1][1] / wvals[0][1],
    }
    report.verdict = PASS if ok else FAIL
    return report


def scenario_continuity_counterexample(params: dict, seed: int = 0) -> VerifyReport:
    """Uniformly local data for which the weighted flow norm does not vanish:
    the weighted values stay bounded below across the dyadic bands."""
    d = int(params.get("d", 1))
    r, p = as_exponent(params.get("r", 1)), as_exponent(params.get("p", 2))
    K = int(params.get("K", 6))
    spec = BubbleTrainSpec(d, r, K, tuple(1.0 for _ in range(K)))
    grid = default_bubble_grid(d, K)
    a = gen_bubble_train(spec, grid)
    sig = (d / 2.0) * (recip(r) - recip(p))
    band_ts = [1.5 * 2.0 ** -k for k in range(1, K + 1)]
    vals = [(t, t ** sig * amalgam_norm(heat_evolve(a, t), p, INF)) for t in band_ts]
    report = VerifyReport(
        scenario=params.get("id", "continuity-counterexample"),
        params=dict(params),
        seed=seed,
        tolerance=3.0,
        prediction="weighted flow norm stays bounded below on uniformly local "
        "bubble-train data (no vanishing without tail decay)",
    )
    report.add_curve("weighted_uloc", vals)
    vs = [v for _, v in vals]
    report.measured = {"min_over_max": min(vs) / max(vs)}
    report.verdict = PASS if min(vs) / max(vs) >= 1.0 / 3.0 else FAIL
    return report


# ---------------------------------------------------------------------------
# solver theorems


def _theorem_config(params: dict) -> SolverConfig:
    regime = params.get("regime", "SUBCRITICAL")
    return SolverConfig(
        T=float(params.get("T", 0.25)),
        n_steps=int(params.get("n_steps", 10)),
        picard_cap=int(params.get("picard_cap", 14)),
        contraction_tol=float(params.get("contraction_tol", 1e-9)),
        regime=regime,
        r=params.get("r", 6.0) if regime == "SUBCRITICAL" else 3.0,
        q=params.get("q", 2.0),
    )


def scenario_theorem(params: dict, seed: int = 0) -> VerifyReport:
    """Existence-theorem checks: contraction, mild residual, divergence, and
    stability of the norm-persistence constant across a data family."""
    regime = params.get("regime", "SUBCRITICAL")
    family = int(params.get("family", 5))
    amplitude = float(params.get("amplitude", 0.1))
    grid = GridSpec.centered(3, int(params.get("box_side", 3)), int(params.get("per_unit", 16)))
    report = VerifyReport(
        scenario=params.get("id", f"theorem-{regime.lower().replace('_', '-')}"),
        params=dict(params),
        seed=seed,
        tolerance=0.25,
    )

    cfg = _theorem_config(params)
    if regime == "CRITICAL_DECAY":
        s, pp = as_exponent(params.get("s", 4)), as_exponent(params.get("p", 6))
        m = as_exponent(params.get("m", 3))
        m1 = 3.0 / (3.0 * recip(cfg.q) - 2.0 * recip(s))
        p_conj = pp / (pp - 1.0)
        gate = m >= max(p_conj, m1) - 1e-12 and (m > m1 + 1e-12 or cfg.q > 1)
        report.predicted = {"m1": m1, "p_conjugate": p_conj}
        if not gate:
            report.verdict = NOT_APPLICABLE
            report.notes = f"global gate m >= max(p', m1) = {max(p_conj, m1):g} fails for m = {m:g}"
            return report

    consts, ratios_ok, resid_ok, div_ok, conv_ok = [], True, True, True, True
    details = {}
    for i in range(family):
        u0 = gen_divfree_random(
            seed + 17 * i,
            grid,
            amplitude,
            norm_p=cfg.r if regime == "SUBCRITICAL" else 3.0,
            norm_q=cfg.q,
        )
        if regime == "SUBCRITICAL":
            T = min(subcritical_timescale(amalgam_norm(u0, cfg.r, cfg.q), cfg.r), cfg.T)
            cfg_i = SolverConfig(
                T=T, n_steps=cfg.n_steps, picard_cap=cfg.picard_cap,
                contraction_tol=cfg.contraction_tol, regime=cfg.regime, r=cfg.r, q=cfg.q,
            )
        else:
            cfg_i = cfg
        u, trace = picard_solve(u0, cfg_i)
        conv_ok &= trace.converged
        tail = trace.contraction_ratios[1:]
        if tail and max(tail) > 0.5:
            ratios_ok = False
        scale = max(trace.iterate_norms[0], 1e-300)
        if trace.final_residual > 10.0 * cfg.contraction_tol * scale:
            resid_ok = False
        div = max(divergence_max(fld) for fld in u.fields)
        if div > 1e-10:
            div_ok = False
        if regime == "SUBCRITICAL":
            C = max(amalgam_norm(fld, cfg.r, cfg.q) for fld in u.fields) / amalgam_norm(u0, cfg.r, cfg.q)
        else:
            denom = amalgam_norm(u0, 3.0, cfg.q)
            s, pp = as_exponent(params.get("s", 5)), as_exponent(params.get("p", 5))
            m = as_exponent(params.get("m", max(cfg.q, 2.0)))
            lhs = spacetime_norm(u, NormSpec("ESPQ", (s, pp, m)))
            if cfg.q <= s:
                lhs += spacetime_norm(u, NormSpec("LS_EPQ", (s, pp, m)))
            C = lhs / denom
            details.setdefault("weighted", []).append(weighted_norms(u, regime, cfg.q))
        consts.append(C)
        details.setdefault("residual_over_scale", []).append(trace.final_residual / scale)
        details.setdefault("divergence", []).append(div)
        details.setdefault("ratios", []).append(trace.contraction_ratios)
    stable = max(consts) / min(consts) <= (1.25 / 0.75) if consts else False
    report.measured = {
        "persistence_constants": consts,
        "constant_spread": max(consts) / min(consts) if consts else math.inf,
        "max_divergence": max(details["divergence"]),
        "max_residual_over_scale": max(details["residual_over_scale"]),
    }
    report.add_curve("persistence_constant", list(zip(range(1, len(consts) + 1), consts)))
    report.prediction = (
        "mild solutions exist with geometric contraction and the regime norm "
        "of the solution stays within a stable multiple of the data norm"
    )
    if not conv_ok:
        report.verdict = FAIL
        report.notes = "DATA_TOO_LARGE: no contraction within the iteration cap"
        return report
    report.verdict = PASS if (ratios_ok and resid_ok and div_ok and stable) else FAIL
    return report


# ---------------------------------------------------------------------------
# counterexamples and strict inclusions


def scenario_bubble(params: dict, seed: int = 0) -> VerifyReport:
    """Bubble-train blow-up of the time-Lebesgue uniformly local norm."""
    d = int(params.get("d", 1))
    r = as_exponent(params.get("r", 1))
    K = int(params.get("K", 6))
    p = as_exponent(params.get("p", 2))
    s = 2.0 / (d * recip(r) - d * recip(p))
    family = params.get("coeffs", "ones")
    if family == "ones":
        coeffs = tuple(1.0 for _ in range(K))
    elif family == "summable":
        coeffs = tuple(4.0 ** -k for k in range(1, K + 1))
    elif family == "harmonic":
        coeffs = tuple(k ** -recip(s) for k in range(1, K + 1))
    else:
        coeffs = tuple(float(c) for c in family)
    spec = BubbleTrainSpec(d, r, K, coeffs)
    grid = default_bubble_grid(d, K, margin=int(params.get("margin", 6)))
    rep = verify_bubble_blowup(spec, grid, s, p, nodes_per_band=int(params.get("nodes_per_band", 4)), seed=seed)
    rep.scenario = params.get("id", f"bubble-{family if isinstance(family, str) else 'custom'}")
    rep.params.update({"coeff_family": str(family), "s": s})

    partials = [v for _, v in rep.curves["partial_integral"]]
    if family == "ones" and K >= 4:
        fit = np.polyfit(np.arange(1, K + 1), partials, 1)
        pred = np.polyval(fit, np.arange(1, K + 1))
        resid = float(np.abs(pred - partials).max() / max(partials))
        rep.measured["linear_fit_slope"] = float(fit[0])
        rep.measured["linear_fit_resid"] = resid
        if not (fit[0] > 0 and resid <= 0.2):
            rep.verdict = FAIL
    elif family == "summable":
        # contrast family: the verdict is boundedness of the partial
        # integrals (geometrically decaying increments imply a finite tail),
        # not band saturation: late bands are dominated by the still
        # undiffused early bubbles, whose plateau makes the integrand
        # near-constant and the increments halve with the band width
        increments = np.diff([0.0] + partials)
        ratio = float(increments[-1] / max(increments[-2], 1e-300))
        rep.measured["increment_decay_ratio"] = ratio
        rep.verdict = PASS if ratio <= 0.75 else FAIL
    return rep


def scenario_strict_inclusion(params: dict, seed: int = 0) -> VerifyReport:
    """Truncated-norm trends separating the amalgam class from the Lebesgue
    classes; the divergent norm must grow monotonically while the convergent
    ones become Cauchy, and the closed-form norm is cross-checked against a
    sampled train on a resolvable window."""
    case = params.get("case", "P_GT_Q")
    p = as_exponent(params.get("p", 4 if case == "P_GT_Q" else 2))
    q = as_exponent(params.get("q", 2 if case == "P_GT_Q" else 4))
    d = int(params.get("d", 1))
    halves = list(params.get("box_halves", (8, 32, 128, 512)))
    report = VerifyReport(
        scenario=params.get("id", f"strict-inclusion-{case.lower().replace('_', '')}"),
        params=dict(params),
        seed=seed,
        tolerance=0.05,
        prediction="one side of the inclusion diverges under box truncation while "
        "the other partial sums converge",
    )
    rows = {"E_p_q": [], "L_p": [], "L_q": []}
    for half in halves:
        _, norms = gen_strict_inclusion(case, p, q, d, half)
        for k in rows:
            rows[k].append((half, norms[k]))
    for k, pairs in rows.items():
        report.add_curve(k, pairs)
    if case == "P_GT_Q":
        divergent, convergent = ["E_p_q"], ["L_p", "L_q"]
    else:
        # both Lebesgue sums are harmonic series here; only the amalgam
        # partial sums converge
        divergent, convergent = ["L_p", "L_q"], ["E_p_q"]

    growing = True
    div_vals = [v for _, v in rows[divergent[0]]]
    for k in divergent:
        vals = [v for _, v in rows[k]]
        growing &= all(b > a * 1.05 for a, b in zip(vals, vals[1:]))
    cauchy = True
    for k in convergent:
        vals = [v for _, v in rows[k]]
        cauchy &= (vals[-1] - vals[-2]) <= 0.05 * vals[-1]

    spec_small, norms_small = gen_strict_inclusion(case, p, q, d, 2)
    grid = GridSpec.centered(d, 6, 64)
    sampled = sample_delta_train(spec_small, grid)
    grid_norm = amalgam_norm(sampled, p, q)
    xcheck = abs(grid_norm - norms_small["E_p_q"]) / norms_small["E_p_q"]
    report.measured = {
        "divergent_values": div_vals,
        "crosscheck_rel_err": xcheck,
    }
    report.verdict = PASS if (growing and cauchy and xcheck < 0.1) else FAIL
    return report


def scenario_switch(params: dict, seed: int = 0) -> VerifyReport:
    """Order-of-norms switches: banded train with exact norms, and the
    sweeping bump whose per-cube-sup norm diverges under box growth."""
    which = params.get("which", "A")
    if which == "A":
        K = int(params.get("K", 6))
        grid = GridSpec((2 * K + 4,), 4, (-2,))
        series = gen_moving_bump("SWITCH_A", grid, K=K)
        espq = spacetime_norm(series, NormSpec("ESPQ", (1, 1, INF)))
        lsl = spacetime_norm(series, NormSpec("LS_EPQ", (1, 1, INF)))
        report = VerifyReport(
            scenario=params.get("id", "switch-banded-train"),
            params=dict(params),
            seed=seed,
            tolerance=1e-12,
            prediction="per-cube-first spacetime norm equals 1 while the "
            "time-Lebesgue norm equals the band count",
        )
        report.measured = {"espq": espq, "ls_l1uloc": lsl, "K": K}
        report.add_curve("band_value", [(k, 1.0) for k in range(1, K + 1)])
        report.verdict = PASS if (espq == 1.0 and lsl == float(K)) else FAIL
        return report
    if which == "B":
        W = int(params.get("W", 16))
        grid = GridSpec.centered(1, 2 * W + 6, 8)
        series = gen_moving_bump("SWITCH_B", grid)
        sup_e11 = max(amalgam_norm(f, 1, 1) for f in series.fields)
        stack = np.stack([cube_norms(f, 1.0) for f in series.fields])
        per_cube_sup = stack.max(axis=0)
        lattice = np.asarray(grid.cube_lattice()[0]).ravel()
        truncs = []
        for half in params.get("box_halves", (4, 8, 16)):
            truncs.append((half, float(per_cube_sup[np.abs(lattice) <= half].sum())))
        report = VerifyReport(
            scenario=params.get("id", "switch-sweeping-bump"),
            params=dict(params),
            seed=seed,
            tolerance=1.4,
            prediction="sup-in-time l^1 amalgam norm stays finite while the "
            "per-cube-sup-first norm grows with the truncation window",
        )
        report.measured = {"sup_E11": sup_e11, "truncated_sups": dict((str(h), v) for h, v in truncs)}
        report.add_curve("truncated_sup_norm", truncs)
        grows = all(b >= 1.4 * a for (_, a), (_, b) in zip(truncs, truncs[1:]))
        report.verdict = PASS if grows and math.isfinite(sup_e11) else FAIL
        return report
    raise DomainError(f"unknown switch {which!r}")


# ---------------------------------------------------------------------------
# regularized scheme and a priori quantities


def scenario_regularized(params: dict, seed: int = 0) -> VerifyReport:
    """Local-energy bound of the mollified/cutoff scheme plus consistency of
    the regularization as the mollification scale shrinks."""
    q = as_exponent(params.get("q", 1.5))
    # odd box side keeps the bump centred on the lattice so its tails die
    # before the periodic seam (the divergence-free check needs ~1e-10 tails)
    grid = GridSpec.centered(3, int(params.get("box_side", 3)), int(params.get("per_unit", 16)))
    amp = float(params.get("amplitude", 0.35))
    u0 = curl_bump(grid, sigma=float(params.get("sigma", 0.18)), amplitude=1.0)
    u0 = u0.scaled(amp / amalgam_norm(u0, 2, q))
    B = amalgam_norm(u0, 2, q)
    eps0 = float(params.get("eps", 0.25))
    res = regularized_solve(
        u0,
        RegularizedConfig(eps0),
        T=float(params.get("T", 0.9 * (1.0 / 64.0) * eps0 ** 3 / B ** 2)),
        q=q,
        n_steps=int(params.get("n_steps", 6)),
    )
    report = VerifyReport(
        scenario=params.get("id", "regularized-local-energy"),
        params=dict(params),
        seed=seed,
        tolerance=2.0,
        prediction="the regularized solution's local energy norm is at most twice "
        "the caloric local energy norm within the admissible horizon",
    )
    report.measured = {
        "le_norm": res.le_norm,
        "caloric_le_norm": res.caloric_le_norm,
        "C0": res.C0,
        "bound_2C0B": 2.0 * res.C0 * B,
        "admissible_window": res.admissible_window,
        "within_window": res.within_window,
        "converged": res.trace.converged,
    }

    # consistency: shrink the mollification scale at one tiny shared horizon
    eps_list = list(params.get("eps_list", (0.25, 0.125, 0.0625)))
    amp_c = float(params.get("consistency_amplitude", 0.05))
    u0c = u0.scaled(amp_c / B)
    Bc = amalgam_norm(u0c, 2, q)
    Tc = 0.9 * (1.0 / 64.0) * min(eps_list) ** 3 / Bc ** 2
    sols = []
    for eps in eps_list:
        r_eps = regularized_solve(u0c, RegularizedConfig(eps), T=Tc, q=q, n_steps=5)
        sols.append(r_eps.u)
    # reference: the unregularized fixed point at the same horizon
    from .solver import dyadic_times

    times = dyadic_times(Tc, 5)
    caloric = FieldSeries(times, [heat_evolve(u0c, float(t)) for t in times])
    u_ref = caloric
    for _ in range(8):
        u_ref = series_combine(caloric, bilinear_series(u_ref, u_ref), 1.0, -1.0)

    def le_diff(a, b):
        dseries = series_combine(a, b, 1.0, -1.0)
        return local_energy_norm(dseries, dseries.map(gradient), q)

    cauchy = [le_diff(sols[i + 1], sols[i]) for i in range(len(sols) - 1)]
    to_ref = [le_diff(s, u_ref) for s in sols]
    report.measured["cauchy_diffs"] = cauchy
    report.measured["diff_to_unregularized"] = to_ref
    report.add_curve("eps_consistency", list(zip(eps_list[1:], cauchy)))
    ok = (
        res.trace.converged
        and res.within_window
        and res.le_norm <= 2.0 * res.caloric_le_norm * (1 + 1e-9)
        and all(b <= a for a, b in zip(cauchy, cauchy[1:]))
        and all(b <= a for a, b in zip(to_ref, to_ref[1:]))
    )
    report.verdict = PASS if ok else FAIL
    return report


def scenario_apriori(params: dict, seed: int = 0) -> VerifyReport:
    """Scale-R lattice energy sums: the 1/R scaling of the normalized sums is
    flat across R within the stated factor."""
    q = as_exponent(params.get("q", 1.5))
    grid = GridSpec.centered(3, int(params.get("box_side", 3)), int(params.get("per_unit", 16)))
    u0 = curl_bump(grid, sigma=float(params.get("sigma", 0.18)), amplitude=1.0)
    Rs = list(params.get("Rs", (1.0, 2.0, 4.0, 8.0)))
    denom = amalgam_norm(u0, 2, q) ** 2
    report = VerifyReport(
        scenario=params.get("id", "apriori-scaling"),
        params=dict(params),
        seed=seed,
        tolerance=float(params.get("max_ratio", 2.0)),
        prediction="the scale-R lattice sum times R stays within a fixed multiple "
        "of the squared amalgam data norm across scales",
    )
    consts, lam, rows = [], [], []
    for R in Rs:
        rec = apriori_quantities(u0, q, R)
        consts.append(rec["A0q"] / denom)
        lam.append(rec["lambda_R"])
        rows.append((R, rec["A0q"] / denom))
    report.add_curve("A0q_over_datanorm", rows)
    report.measured = {
        "constants": consts,
        "spread": max(consts) / min(consts),
        "lambda_R": dict((str(R), l) for R, l in zip(Rs, lam)),
    }
    report.verdict = PASS if max(consts) / min(consts) <= report.tolerance else FAIL
    return report


# ---------------------------------------------------------------------------
# truncation control


def scenario_box_doubling_decay(params: dict, seed: int = 0) -> VerifyReport:
    """Re-run decay scenarios on a doubled box; fitted slopes must move < tol."""
    ids = params.get("ids")
    tol = float(params.get("tol", 0.05))
    report = VerifyReport(
        scenario=params.get("id", "box-doubling-decay"),
        params=dict(params),
        seed=seed,
        tolerance=tol,
        prediction="fitted decay slopes are insensitive to the box truncation",
    )
    shifts = {}
    ok = True
    for ref_id in ids:
        base_params = dict(CATALOG[ref_id]["params"])
        r1 = scenario_decay(base_params, seed)
        doubled = dict(base_params)
        doubled["box_side"] = 2 * int(base_params.get("box_side", 4 if base_params.get("regime", "SMALL_T") == "SMALL_T" else 104))
        r2 = scenario_decay(doubled, seed)
        shift = abs(r1.measured["slope"] - r2.measured["slope"])
        shifts[ref_id] = shift
        ok &= shift < tol
    report.measured = {"slope_shifts": shifts, "max_shift": max(shifts.values())}
    report.add_curve("slope_shift", [(i + 1.0, s) for i, s in enumerate(shifts.values())])
    report.verdict = PASS if ok else FAIL
    return report


def scenario_box_doubling_norms(params: dict, seed: int = 0) -> VerifyReport:
    """Doubling the periodic box changes the reported norms of a compactly
    supported experiment by less than 1 percent."""
    tol = float(params.get("tol", 0.01))
    d = int(params.get("d", 2))
    grid = GridSpec.centered(d, int(params.get("box_side", 8)), int(params.get("per_unit", 16)))
    big = grid.doubled()
    report = VerifyReport(
        scenario=params.get("id", "box-doubling-norms"),
        params=dict(params),
        seed=seed,
        tolerance=tol,
        prediction="periodic truncation control: doubled box moves compact-data norms by < 1%",
    )
    rel = {}
    for t in (0.05, 0.2):
        for (p, q) in ((2.0, 2.0), (INF, 1.0), (3.0, 2.0)):
            vals = []
            for g in (grid, big):
                f = gaussian_bump(g, 0.3)
                vals.append(amalgam_norm(heat_evolve(f, t), p, q))
            rel[f"t{t:g}_p{p:g}_q{q:g}".replace("inf", "oo")] = abs(vals[1] - vals[0]) / vals[0]
    report.measured = {"relative_changes": rel, "max_change": max(rel.values())}
    report.verdict = PASS if max(rel.values()) < tol else FAIL
    return report


def scenario_region_three(params: dict, seed: int = 0) -> VerifyReport:
    """Measured-but-unexplained: growth of the time-Lebesgue norm of the heat
    flow for sum exponents just below versus at the jump threshold."""
    q = as_exponent(params.get("q", 2.5))
    s, p = as_exponent(params.get("s", 4)), as_exponent(params.get("p", 6))
    m1 = 3.0 / (3.0 * recip(q) - 2.0 * recip(s))
    m_low = max(p / (p - 1.0), m1)
    report = VerifyReport(
        scenario=params.get("id", "region-three-jump"),
        params=dict(params),
        seed=seed,
        prediction="the admissible lower sum exponent for global time-Lebesgue "
        "bounds jumps in this parameter region; measured only",
    )
    grid = GridSpec.centered(3, 32, 1)
    f = gen_divfree_random(seed, grid, 1.0, norm_p=3, norm_q=q, kcut_frac=0.15)
    for label, m in (("m_low", m_low), ("m_eq_p", p)):
        pairs = []
        for T in (4.0, 16.0, 64.0):
            series = _heat_series(f, T, n=12)
            pairs.append((T, spacetime_norm(series, NormSpec("LS_EPQ", (s, p, m)))))
        report.add_curve(label, pairs)
    report.measured = {"m_low": m_low, "m1": m1}
    report.verdict = NOT_APPLICABLE
    report.notes = "informational scenario: no verdict is defined for this region"
    return report


# ---------------------------------------------------------------------------
# catalog


def _decay_entries():
    entries = {}
    for d in (1, 2):
        for (pt, p) in ((1, 2), (1, INF), (2, 4)):
            for h in (0, 1):
                sid = f"decay-heat-d{d}-p{pt:g}-{p:g}-h{h}".replace("inf", "oo")
                entries[sid] = {
                    "fn": scenario_decay,
                    "params": {
                        "id": sid, "d": d, "pt": pt, "p": p, "qt": pt, "q": p,
                        "h": h, "kind": "heat", "regime": "SMALL_T",
                        "tol": 0.1 if d == 1 else 0.15,
                    },
                    "description": f"heat flow decay exponent, d={d}, source {pt:g} target {p:g}, derivative {h}",
                    "prediction": "semigroup decay exponent -(d/2)(1/pt-1/p) - h/2",
                }
    entries["decay-oseen-d3"] = {
        "fn": scenario_decay,
        "params": {
            "id": "decay-oseen-d3", "d": 3, "pt": 1.5, "p": 3.0, "qt": 1.5, "q": 3.0,
            "kind": "oseen", "regime": "SMALL_T", "tol": 0.15,
        },
        "description": "evolve-project-divergence decay exponent at 64^3, source 3/2 target 3",
        "prediction": "tensor-to-velocity decay exponent -(d/2)(1/pt-1/p) - 1/2 = -1",
    }
    for h in (0, 1):
        sid = f"decay-heat-large-t-h{h}"
        entries[sid] = {
            "fn": scenario_decay,
            "params": {
                "id": sid, "d": 1, "pt": 1, "p": 2, "qt": 1, "q": 2, "h": h,
                "kind": "heat", "regime": "LARGE_T", "tol": 0.15,
            },
            "description": f"large-time decay of a spaced equal-bump train, derivative {h}",
            "prediction": "large-time decay exponent -(d/2)(1/qt-1/q) - h/2",
        }
    return entries


CATALOG = {}
CATALOG.update(_decay_entries())
CATALOG.update(
    {
        "kernel-norms-heat": {
            "fn": scenario_kernel_norms,
            "params": {"id": "kernel-norms-heat", "kind": "heat"},
            "description": "heat kernel amalgam norms against the two-term envelope",
            "prediction": "measured/envelope flat within a factor 3 across 16 octaves",
        },
        "kernel-norms-phi": {
            "fn": scenario_kernel_norms,
            "params": {"id": "kernel-norms-phi", "kind": "phi"},
            "description": "pointwise-majorant amalgam norms against the envelope",
            "prediction": "measured/envelope flat within a factor 3 across 16 octaves",
        },
        "scale-invariance": {
            "fn": scenario_scale_invariance,
            "params": {"id": "scale-invariance", "d": 1, "r": 2, "s": 8, "p": 4},
            "description": "parabolic rescaling invariance of the critical smoothing bound (r=2, s=8, p=4)",
            "prediction": "ratio agreement within 5% across rescalings",
        },
        "scale-invariance-b": {
            "fn": scenario_scale_invariance,
            "params": {"id": "scale-invariance-b", "d": 1, "r": 2, "s": 6, "p": 6},
            "description": "parabolic rescaling invariance, endpoint s = p (r=2, s=6, p=6)",
            "prediction": "ratio agreement within 5% across rescalings",
        },
        "scale-invariance-c": {
            "fn": scenario_scale_invariance,
            "params": {"id": "scale-invariance-c", "d": 1, "r": 1.5, "s": 4, "p": 6},
            "description": "parabolic rescaling invariance (r=3/2, s=4, p=6)",
            "prediction": "ratio agreement within 5% across rescalings",
        },
        "scale-invariance-violation": {
            "fn": scenario_bubble,
            "params": {"id": "scale-invariance-violation", "d": 3, "r": 3, "p": 12, "K": 3, "coeffs": "harmonic", "margin": 4, "nodes_per_band": 3},
            "description": "bubble train showing the smoothing bound fails when the time exponent drops below the data exponent",
            "prediction": "band-wise lower bound with a single constant; coefficient power sums diverge",
        },
        "spacetime-espq-uniform": {
            "fn": scenario_spacetime,
            "params": {"id": "spacetime-espq-uniform", "law": "heat_espq", "d": 1, "r": 2, "q": 2, "s": 8, "p": 4, "m": 4},
            "description": "T-uniform per-cube spacetime bound at the zero-growth exponent",
            "prediction": "LHS/RHS flat in T including large T",
        },
        "spacetime-espq-growth": {
            "fn": scenario_spacetime,
            "params": {"id": "spacetime-espq-growth", "law": "heat_espq", "d": 1, "r": 2, "q": 2, "s": 8, "p": 4, "m": 2},
            "description": "finite-T per-cube spacetime bound with growth allowance",
            "prediction": "LHS/(1+T^beta) RHS flat in T",
        },
        "spacetime-lsepm-e1": {
            "fn": scenario_spacetime,
            "params": {"id": "spacetime-lsepm-e1", "law": "heat_lsepm", "d": 1, "r": 2, "q": 2, "s": 6, "p": 6, "m": 8},
            "description": "global time-Lebesgue bound on the nested-exponent family",
            "prediction": "LHS/RHS flat in T including large T",
        },
        "spacetime-lsepm-e2": {
            "fn": scenario_spacetime,
            "params": {"id": "spacetime-lsepm-e2", "law": "heat_lsepm", "d": 1, "r": 2, "q": 2, "s": 8, "p": 4, "m": 16},
            "description": "global time-Lebesgue bound on the small-sum-exponent family",
            "prediction": "LHS/RHS flat in T including large T",
        },
        "spacetime-lsepm-unclear": {
            "fn": scenario_spacetime,
            "params": {"id": "spacetime-lsepm-unclear", "law": "heat_lsepm", "d": 1, "r": 2, "q": 4, "s": 6, "p": 6, "m": 12},
            "description": "time-Lebesgue growth in the unresolved parameter family (measured only)",
            "prediction": "no global bound is claimed here",
        },
        "spacetime-duhamel": {
            "fn": scenario_spacetime,
            "params": {"id": "spacetime-duhamel", "law": "duhamel_espq", "s": 4, "p": 6, "m": 2},
            "description": "Duhamel tensor-to-velocity spacetime bound, d = 3",
            "prediction": "LHS within (1 + T^(1-1/s)) times the tensor norm, flat ratio",
        },
        "local-energy-bounds": {
            "fn": scenario_spacetime,
            "params": {"id": "local-energy-bounds", "law": "local_energy", "q": 1.5},
            "description": "l^q local energy bounds for the heat flow and the Duhamel term, d = 3",
            "prediction": "LE_q within (1 + T^0.1) times the data/tensor norm, flat ratio",
        },
        "continuity-vanishing": {
            "fn": scenario_continuity,
            "params": {"id": "continuity-vanishing"},
            "description": "translation/semigroup continuity and weighted vanishing on smooth compact data",
            "prediction": "all four dyadic sequences decrease toward zero",
        },
        "continuity-counterexample": {
            "fn": scenario_continuity_counterexample,
            "params": {"id": "continuity-counterexample"},
            "description": "uniformly local bubble train: the weighted flow norm does not vanish",
            "prediction": "weighted values flat (bounded below) across bands",
        },
        "bubble-blowup": {
            "fn": scenario_bubble,
            "params": {"id": "bubble-blowup", "d": 1, "r": 1, "p": 2, "K": 6, "coeffs": "ones"},
            "description": "bubble-train blow-up: partial time integrals grow linearly in the band count",
            "prediction": "I_K linear in K, band lower bounds with one constant",
        },
        "bubble-blowup-contrast": {
            "fn": scenario_bubble,
            "params": {"id": "bubble-blowup-contrast", "d": 1, "r": 1, "p": 2, "K": 6, "coeffs": "summable"},
            "description": "summable-coefficient contrast: partial time integrals stay bounded",
            "prediction": "I_K Cauchy (vanishing increments)",
        },
        "strict-inclusion-pgtq": {
            "fn": scenario_strict_inclusion,
            "params": {"id": "strict-inclusion-pgtq", "case": "P_GT_Q", "p": 4, "q": 2, "d": 1},
            "description": "p > q: amalgam norm diverges under truncation, Lebesgue norms converge",
            "prediction": "monotone divergence vs Cauchy partial sums",
        },
        "strict-inclusion-pltq": {
            "fn": scenario_strict_inclusion,
            "params": {"id": "strict-inclusion-pltq", "case": "P_LT_Q", "p": 2, "q": 4, "d": 1},
            "description": "p < q: amalgam partial sums converge while the L^p norm diverges",
            "prediction": "monotone divergence vs Cauchy partial sums",
        },
        "switch-a": {
            "fn": scenario_switch,
            "params": {"id": "switch-a", "which": "A", "K": 6},
            "description": "banded bump train: exact values of the two spacetime norms",
            "prediction": "per-cube-first norm = 1 exactly, time-Lebesgue norm = K exactly",
        },
        "switch-b": {
            "fn": scenario_switch,
            "params": {"id": "switch-b", "which": "B", "W": 16},
            "description": "sweeping bump: sup-in-time norm finite, per-cube-sup norm grows with the window",
            "prediction": "truncated per-cube-sup norm grows without bound",
        },
        "theorem-subcritical": {
            "fn": scenario_theorem,
            "params": {"id": "theorem-subcritical", "regime": "SUBCRITICAL", "r": 6, "q": 2, "family": 5, "amplitude": 0.1},
            "description": "locally subcritical data: contraction, residual, divergence, persistence constants",
            "prediction": "geometric contraction <= 1/2 and persistence constant stable within 25%",
        },
        "theorem-critical-small": {
            "fn": scenario_theorem,
            "params": {"id": "theorem-critical-small", "regime": "CRITICAL_SMALL", "q": 2, "family": 3, "amplitude": 0.05, "s": 5, "p": 5, "m": 2},
            "description": "small critical data: weighted-norm iteration and spacetime bounds",
            "prediction": "contraction and stable spacetime persistence constant",
        },
        "theorem-critical-decay": {
            "fn": scenario_theorem,
            "params": {"id": "theorem-critical-decay", "regime": "CRITICAL_DECAY", "q": 2, "family": 3, "amplitude": 0.05, "s": 4, "p": 6, "m": 3},
            "description": "critical data with decay: gated spacetime bounds",
            "prediction": "contraction and stable spacetime persistence constant past the gate",
        },
        "regularized-local-energy": {
            "fn": scenario_regularized,
            "params": {"id": "regularized-local-energy", "q": 1.5, "eps": 0.25},
            "description": "mollified/cutoff scheme: local-energy bound and shrinking-scale consistency",
            "prediction": "LE norm <= 2 x caloric LE norm; differences Cauchy in the scale",
        },
        "apriori-scaling": {
            "fn": scenario_apriori,
            "params": {"id": "apriori-scaling", "q": 1.5},
            "description": "scale-R lattice energy sums: normalized constants flat across R in {1,2,4,8}",
            "prediction": "A0q / ||u0||^2 within a factor 2 across scales",
        },
        "box-doubling-decay": {
            "fn": scenario_box_doubling_decay,
            "params": {
                "id": "box-doubling-decay",
                "ids": ["decay-heat-d1-p1-2-h0", "decay-heat-d1-p2-4-h1", "decay-heat-d2-p1-oo-h0", "decay-oseen-d3"],
                "tol": 0.05,
            },
            "description": "truncation control: decay slopes move < 0.05 when the box doubles",
            "prediction": "slope shifts below 0.05",
        },
        "box-doubling-norms": {
            "fn": scenario_box_doubling_norms,
            "params": {"id": "box-doubling-norms", "d": 2},
            "description": "truncation control: compact-data norms move < 1% when the box doubles",
            "prediction": "relative norm changes below 1%",
        },
        "region-three-jump": {
            "fn": scenario_region_three,
            "params": {"id": "region-three-jump", "q": 2.5, "s": 4, "p": 6},
            "description": "measured-only: time-Lebesgue growth near the jump of the admissible sum exponent",
            "prediction": "informational; no verdict",
        },
    }
)


def run_scenario(scenario_id: str, overrides: dict = None, seed: int = 0) -> VerifyReport:
    if scenario_id not in CATALOG:
        raise DomainError(f"unknown scenario {scenario_id!r}; see the catalog")
    entry = CATALOG[scenario_id]
    params = dict(entry["params"])
    if overrides:
        params.update(overrides)
    return entry["fn"](params, seed=seed)


def catalog_rows():
    for sid, entry in CATALOG.items():
        yield sid, entry["description"], entry["prediction"]
