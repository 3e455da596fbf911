import math

import numpy as np
import pytest

from amalgam.grid import DomainError, FieldSeries, GridField, GridSpec, PreconditionError
from amalgam.norms import amalgam_norm, lebesgue_norm
from amalgam.solver import (
    RegularizedConfig,
    SolverConfig,
    apriori_quantities,
    dyadic_times,
    mollify,
    picard_solve,
    regularized_solve,
    regime_norm,
    subcritical_timescale,
    weighted_norms,
)
from amalgam.spectral import bilinear_series, divergence_max, heat_evolve, leray_project


def shear_wave(spec, amplitude):
    """Exactly divergence-free single-mode velocity on the periodic box."""
    a = 2 * math.pi / spec.sides[0]
    coords = spec.coord_arrays()
    u1 = np.sin(a * np.asarray(coords[0])) * np.cos(a * np.asarray(coords[1]))
    u2 = -np.cos(a * np.asarray(coords[0])) * np.sin(a * np.asarray(coords[1]))
    comps = [np.broadcast_to(u1, spec.cells), np.broadcast_to(u2, spec.cells)]
    comps += [np.zeros(spec.cells)] * (spec.d - 2)
    return GridField(spec, amplitude * np.stack(comps))


GRID = GridSpec.centered(3, 2, 8)  # 16^3, cheap


def small_cfg(**kw):
    base = dict(T=0.25, n_steps=8, picard_cap=15, contraction_tol=1e-9, regime="SUBCRITICAL", r=6, q=2)
    base.update(kw)
    return SolverConfig(**base)


def test_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(T=-1.0)
    with pytest.raises(DomainError):
        SolverConfig(T=1.0, regime="SUBCRITICAL", r=3)
    with pytest.raises(DomainError):
        SolverConfig(T=1.0, regime="CRITICAL_DECAY", r=3, q=4)
    with pytest.raises(DomainError):
        SolverConfig(T=1.0, regime="CRITICAL_SMALL", r=4)


def test_dyadic_times_shape():
    t = dyadic_times(0.5, 6)
    assert t[0] == 0.0
    assert t[-1] == 0.5
    assert np.allclose(np.diff(np.log2(t[1:])), 1.0)


def test_zero_data_converges_immediately():
    u, trace = picard_solve(GridField.zeros(GRID, 3), small_cfg())
    assert trace.converged and trace.iterations == 0
    assert trace.final_residual == 0.0


def test_rejects_non_divergence_free():
    rng = np.random.default_rng(0)
    bad = GridField(GRID, rng.standard_normal((3,) + GRID.cells))
    with pytest.raises(PreconditionError):
        picard_solve(bad, small_cfg())


def test_mild_residual_oracle_and_contraction():
    u0 = shear_wave(GRID, 0.1)
    cfg = small_cfg()
    u, trace = picard_solve(u0, cfg)
    assert trace.converged
    # geometric contraction after the first step
    assert all(r <= 0.5 for r in trace.contraction_ratios[1:])
    # independent residual oracle: re-evaluate the fixed-point map with the
    # public operators, node by node
    caloric = FieldSeries(u.times, [heat_evolve(u0, float(t)) for t in u.times])
    Buu = bilinear_series(u, u)
    scale = trace.iterate_norms[0]
    for j, t in enumerate(u.times):
        res = u.fields[j].samples - (caloric.fields[j].samples - Buu.fields[j].samples)
        assert lebesgue_norm(GridField(GRID, res), 2) <= 10 * cfg.contraction_tol * scale
    # divergence-free throughout
    assert all(divergence_max(f) <= 1e-10 for f in u.fields)


def test_norm_persistence_small_family():
    consts = []
    for amp in (0.05, 0.08, 0.1):
        u0 = shear_wave(GRID, amp)
        u, trace = picard_solve(u0, small_cfg())
        assert trace.converged
        c = max(amalgam_norm(f, 6, 2) for f in u.fields) / amalgam_norm(u0, 6, 2)
        consts.append(c)
    assert max(consts) / min(consts) <= 1.25 / 0.75


def test_failure_monotone_in_scale():
    statuses = []
    for amp in (0.1 * 4.0 ** k for k in range(6)):
        u0 = shear_wave(GRID, amp)
        _, trace = picard_solve(u0, small_cfg(picard_cap=10))
        statuses.append(trace.converged)
    # once the iteration stops contracting it never comes back at larger data
    first_fail = statuses.index(False) if False in statuses else len(statuses)
    assert all(not s for s in statuses[first_fail:])
    assert statuses[0]


def test_energy_decay_of_caloric_part():
    u0 = shear_wave(GRID, 0.5)
    vals = [lebesgue_norm(heat_evolve(u0, t), 2) for t in (0.0, 0.1, 0.2, 0.4)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_uniqueness_spot_check_data_continuity():
    u0 = shear_wave(GRID, 0.1)
    u_a, _ = picard_solve(u0, small_cfg())
    bump = leray_project(
        GridField(GRID, np.random.default_rng(5).standard_normal((3,) + GRID.cells))
    ).scaled(1e-4)
    u_b, _ = picard_solve(GridField(GRID, u0.samples + bump.samples), small_cfg())
    diff = max(
        lebesgue_norm(GridField(GRID, a.samples - b.samples), 2)
        for a, b in zip(u_a.fields, u_b.fields)
    )
    assert diff <= 5e-4


def test_subcritical_timescale_limits():
    assert subcritical_timescale(0.0, 6) == 2.0 ** 20
    # r = inf: the condition collapses to 2 sqrt(T) <= 1/(8 N)
    N = 0.01
    T = subcritical_timescale(N, math.inf)
    assert 2 * math.sqrt(T) <= 1 / (8 * N)
    assert 2 * math.sqrt(2 * T) > 1 / (8 * N)
    with pytest.raises(DomainError):
        subcritical_timescale(1.0, 3)


def test_subcritical_timescale_bisection_oracle():
    # largest dyadic T with T^(1/4) + T^(1/2) <= 1/8, found independently
    bound = 1.0 / 8.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid ** 0.25 + mid ** 0.5 <= bound:
            lo = mid
        else:
            hi = mid
    expect = 2.0 ** math.floor(math.log2(lo))
    assert subcritical_timescale(1.0, 6) == expect


def test_weighted_norms_zero_and_bounds():
    times = dyadic_times(1.0, 6)
    zero = FieldSeries(times, [GridField.zeros(GRID, 3)] * times.size)
    w = weighted_norms(zero, "CRITICAL_SMALL", 2)
    assert w["sup_t12_Einf"] == 0.0 and w["sup_t14_E6"] == 0.0

    # heat flow of compact data: the weighted sup stays bounded on (0, 1]
    spec1 = GridSpec.centered(3, 3, 8)
    coords = spec1.coord_arrays()
    inside = np.ones(spec1.cells, dtype=bool)
    for c in coords:
        inside &= np.broadcast_to(np.abs(np.asarray(c)) < 0.5, spec1.cells)
    u0 = leray_project(GridField(spec1, np.stack([inside.astype(float)] + [np.zeros(spec1.cells)] * 2)))
    series = FieldSeries(times, [heat_evolve(u0, float(t)) for t in times])
    w = weighted_norms(series, "CRITICAL_SMALL", 2)
    assert 0 < w["sup_t12_Einf"] <= 5.0 * amalgam_norm(u0, 3, 2)
    # the quarter-weighted norm vanishes as the horizon shrinks below the
    # data's diffusion scale
    sups = []
    for T in (0.0625, 2.0 ** -7, 2.0 ** -10):
        sub = FieldSeries(dyadic_times(T, 6), [heat_evolve(u0, float(t)) for t in dyadic_times(T, 6)])
        sups.append(weighted_norms(sub, "CRITICAL_SMALL", 2)["sup_t14_E6"])
    assert sups[2] < sups[1] < sups[0]


def test_weighted_norms_decay_regime_exponents():
    times = dyadic_times(0.5, 4)
    u = FieldSeries(times, [shear_wave(GRID, 0.1)] * times.size)
    w = weighted_norms(u, "CRITICAL_DECAY", 2)
    assert w["q6"] == pytest.approx(3.0)
    assert w["qinf"] == pytest.approx(6.0)


def test_regularized_zero_data():
    res = regularized_solve(GridField.zeros(GRID, 3), RegularizedConfig(0.25), T=1e-3, q=1.5, n_steps=4)
    assert res.le_norm == 0.0 and res.trace.converged


def test_regularized_le_bound_and_window():
    u0 = shear_wave(GRID, 0.2)
    B = amalgam_norm(u0, 2, 1.5)
    T = 0.9 * (1.0 / 64.0) * 0.25 ** 3 / B ** 2
    res = regularized_solve(u0, RegularizedConfig(0.25), T=T, q=1.5, n_steps=5)
    assert res.within_window and res.trace.converged
    assert res.le_norm <= 2.0 * res.caloric_le_norm * (1 + 1e-9)
    assert res.C0 > 0


def test_regularized_config_validation():
    with pytest.raises(DomainError):
        RegularizedConfig(1.5)
    with pytest.raises(DomainError):
        RegularizedConfig(0.0)


def test_mollifier_smooths_and_preserves_mass():
    spec = GridSpec.centered(3, 3, 8)
    rng = np.random.default_rng(3)
    f = GridField(spec, rng.standard_normal((1,) + spec.cells))
    jf = mollify(f, 0.5)
    assert jf.samples.sum() == pytest.approx(f.samples.sum(), rel=1e-10)
    assert jf.samples.std() < f.samples.std()


def test_apriori_zero_data():
    rec = apriori_quantities(GridField.zeros(GRID, 3), 1.5, 1.0)
    assert rec["N0_qR"] == 0.0 and rec["A0q"] == 0.0
    assert rec["lambda_R"] == pytest.approx(min(1 / 64, 1 / 64 * 1.0))
    rec2 = apriori_quantities(GridField.zeros(GRID, 3), 1.5, 0.5)
    assert rec2["lambda_R"] == pytest.approx((1 / 64) * 0.25)


def test_apriori_alignment_error():
    with pytest.raises(Exception):
        apriori_quantities(GridField.zeros(GRID, 3), 1.5, 0.3)


def test_apriori_single_cube_direct_lattice_oracle():
    spec = GridSpec.centered(3, 3, 8)
    coords = spec.coord_arrays()
    inside = np.ones(spec.cells, dtype=bool)
    for c in coords:
        inside &= np.broadcast_to(np.abs(np.asarray(c)) < 0.5, spec.cells)
    u0 = GridField(spec, np.stack([inside.astype(float)] + [np.zeros(spec.cells)] * 2))
    rec = apriori_quantities(u0, 2.0, 1.0)

    # direct lattice-sum oracle with explicit loops
    mag2 = u0.magnitude() ** 2
    xs = [spec.axis_coords(a) for a in range(3)]
    masses = []
    for k0 in range(-3, 4):
        for k1 in range(-3, 4):
            for k2 in range(-3, 4):
                total = 0.0
                for i0, x0 in enumerate(xs[0]):
                    for i1, x1 in enumerate(xs[1]):
                        row = mag2[i0, i1]
                        d2 = (x0 - k0) ** 2 + (x1 - k1) ** 2 + (xs[2] - k2) ** 2
                        total += row[d2 < 1.0].sum()
                if total > 0:
                    masses.append(total * spec.cell_volume)
    expect = sum(m ** 1.0 for m in masses) ** 1.0  # q = 2: plain sum
    assert rec["N0_qR"] == pytest.approx(expect, rel=1e-12)
    # single-cube data: the lattice sum is the squared mass up to the overlap
    # constant of the ball cover
    l2sq = lebesgue_norm(u0, 2) ** 2
    assert l2sq <= rec["N0_qR"] <= 8.0 * l2sq


def test_regime_norm_excludes_origin_in_weighted_regimes():
    times = dyadic_times(1.0, 4)
    fields = [shear_wave(GRID, 1.0)] * times.size
    series = FieldSeries(times, fields)
    cfg = SolverConfig(T=1.0, regime="CRITICAL_SMALL", r=3, q=2)
    v = regime_norm(series, cfg)
    assert v == pytest.approx(max(t ** 0.25 for t in times[1:]) * amalgam_norm(fields[0], 6, 2))
