import math

import numpy as np
import pytest

from amalgam.constructions import (
    BubbleTrainSpec,
    DeltaTrainSpec,
    default_bubble_grid,
    gen_bubble_train,
    gen_divfree_random,
    gen_moving_bump,
    gen_strict_inclusion,
    sample_delta_train,
    verify_bubble_blowup,
)
from amalgam.grid import INF, DomainError, GridSpec, ResolutionError
from amalgam.norms import NormSpec, amalgam_norm, lebesgue_norm, spacetime_norm
from amalgam.spectral import divergence_max, leray_project


def test_bubble_zero_coefficients_zero_field():
    spec = BubbleTrainSpec(1, 1, 3, (0.0, 0.0, 0.0))
    grid = default_bubble_grid(1, 3)
    assert np.abs(gen_bubble_train(spec, grid).samples).max() == 0.0


def test_bubble_lr_norm_constant_in_k():
    r = 1.0
    grid = default_bubble_grid(1, 3, margin=4)
    norms = []
    for k in range(1, 4):
        coeffs = tuple(1.0 if i == k else 0.0 for i in range(1, 4))
        a = gen_bubble_train(BubbleTrainSpec(1, r, 3, coeffs), grid)
        norms.append(lebesgue_norm(a, r))
    assert max(norms) / min(norms) <= 1.1


def test_bubble_amalgam_norm_tracks_coefficient_sequence():
    r, K = 1.0, 4
    grid = default_bubble_grid(1, K, margin=4)
    # two-sided equivalence: the constants differ per bubble because the
    # first ball (radius ~0.71) straddles cube boundaries, so coefficient
    # patterns sample slightly different geometric factors
    for q in (2.0, INF):
        ratios = []
        for coeffs in [(1.0,) * K, (1.0, 0.5, 0.25, 0.125)]:
            a = gen_bubble_train(BubbleTrainSpec(1, r, K, coeffs), grid)
            if math.isinf(q):
                lq = max(coeffs)
            else:
                lq = sum(c ** q for c in coeffs) ** (1 / q)
            ratios.append(amalgam_norm(a, r, q) / lq)
        assert max(ratios) / min(ratios) <= 2.0


def test_bubble_resolution_error():
    spec = BubbleTrainSpec(1, 1, 6, (1.0,) * 6)
    with pytest.raises(ResolutionError):
        gen_bubble_train(spec, GridSpec((24,), 4, (-6,)))


def test_bubble_blowup_empty_and_bad_exponents():
    grid = default_bubble_grid(1, 2, margin=4)
    rep = verify_bubble_blowup(BubbleTrainSpec(1, 1, 0, ()), grid, 4, 2)
    assert rep.verdict == "PASS" and rep.measured["I_total"] == 0.0
    with pytest.raises(DomainError):
        verify_bubble_blowup(BubbleTrainSpec(1, 1, 2, (1.0, 1.0)), grid, 3, 2)


def test_delta_train_norm_identity_exact():
    spec = DeltaTrainSpec(1, ((0,), (2,)), (1.0, 2.0), (0.5, 0.25))
    p, q = 4.0, 2.0
    expect = (1.0 * 0.5 ** (q / p) + 2.0 ** q * 0.25 ** (q / p)) ** (1 / q)
    assert spec.norm_identity(p, q) == pytest.approx(expect, rel=1e-14)
    assert spec.lebesgue_identity(p) == pytest.approx((0.5 + 2.0 ** p * 0.25) ** (1 / p), rel=1e-14)


def test_delta_train_widths_stay_in_cells():
    with pytest.raises(DomainError):
        DeltaTrainSpec(1, ((0,),), (1.0,), (1.5,))


def test_strict_inclusion_cases_and_trends():
    specA, normsA = gen_strict_inclusion("P_GT_Q", 4, 2, 1, 64)
    specB, normsB = gen_strict_inclusion("P_LT_Q", 2, 4, 1, 64)
    # P_GT_Q: Lebesgue sums converge, amalgam sum grows with the box
    _, biggerA = gen_strict_inclusion("P_GT_Q", 4, 2, 1, 256)
    assert biggerA["E_p_q"] > 1.1 * normsA["E_p_q"]
    assert biggerA["L_p"] - normsA["L_p"] <= 0.05 * biggerA["L_p"]
    # P_LT_Q: amalgam sum converges, L^p grows
    _, biggerB = gen_strict_inclusion("P_LT_Q", 2, 4, 1, 256)
    assert biggerB["L_p"] > 1.05 * normsB["L_p"]
    assert biggerB["E_p_q"] - normsB["E_p_q"] <= 0.01 * biggerB["E_p_q"]
    with pytest.raises(DomainError):
        gen_strict_inclusion("P_GT_Q", 2, 4, 1, 8)


def test_strict_inclusion_single_term_finite():
    spec = DeltaTrainSpec(1, ((0,),), (1.0,), (0.5,))
    for value in (spec.norm_identity(4, 2), spec.lebesgue_identity(4), spec.lebesgue_identity(2)):
        assert math.isfinite(value) and value > 0


def test_sampled_train_matches_identity():
    spec, norms = gen_strict_inclusion("P_GT_Q", 4, 2, 1, 2)
    grid = GridSpec.centered(1, 6, 64)
    sampled = sample_delta_train(spec, grid)
    assert amalgam_norm(sampled, 4, 2) == pytest.approx(norms["E_p_q"], rel=0.1)


def test_moving_bump_switch_a_exact_values():
    K = 1
    grid = GridSpec((2 * K + 4,), 4, (-2,))
    series = gen_moving_bump("SWITCH_A", grid, K=K)
    assert spacetime_norm(series, NormSpec("ESPQ", (1, 1, INF))) == 1.0
    assert spacetime_norm(series, NormSpec("LS_EPQ", (1, 1, INF))) == 1.0


def test_moving_bump_switch_b_single_window_finite():
    grid = GridSpec.centered(1, 10, 8)
    series = gen_moving_bump("SWITCH_B", grid)
    a = spacetime_norm(series, NormSpec("LS_EPQ", (INF, 1, 1)))
    b = spacetime_norm(series, NormSpec("ESPQ", (INF, 1, 1)))
    assert math.isfinite(a) and math.isfinite(b) and 0 < a <= b


def test_divfree_random_contracts():
    grid = GridSpec.centered(3, 2, 8)
    z = gen_divfree_random(0, grid, 0.0)
    assert np.abs(z.samples).max() == 0.0
    v = gen_divfree_random(1, grid, 0.7, norm_p=3, norm_q=2)
    assert amalgam_norm(v, 3, 2) == pytest.approx(0.7, abs=1e-10)
    assert divergence_max(v) <= 1e-10
    pv = leray_project(v)
    assert np.abs(pv.samples - v.samples).max() <= 1e-12 * np.abs(v.samples).max()


def test_divfree_random_deterministic():
    grid = GridSpec.centered(2, 3, 8)
    a = gen_divfree_random(42, grid, 0.3)
    b = gen_divfree_random(42, grid, 0.3)
    assert np.array_equal(a.samples, b.samples)
    c = gen_divfree_random(43, grid, 0.3)
    assert not np.array_equal(a.samples, c.samples)


def test_bubble_spec_validation():
    with pytest.raises(DomainError):
        BubbleTrainSpec(1, 1, 2, (1.0,))
    with pytest.raises(DomainError):
        BubbleTrainSpec(1, 1, 1, (-1.0,))
    spec = BubbleTrainSpec(2, 2.0, 1, (1.0,))
    assert spec.beta == pytest.approx(1.0)
    assert spec.radius(2) == pytest.approx(0.5)
    assert spec.center(3)[0] == pytest.approx(6.0)
