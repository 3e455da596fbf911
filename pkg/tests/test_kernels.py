import math

import numpy as np
import pytest

from amalgam.grid import DomainError, GridSpec
from amalgam.kernels import eval_kernel, kernel_amalgam_bound, oseen_pointwise_bound


def test_heat_kernel_peak_value():
    # (4 pi t)^(-1/2) = 1 at t = 1/(4 pi) in one dimension
    t = 1.0 / (4.0 * math.pi)
    spec = GridSpec((1,), 101, (0,))  # odd cell count puts a sample at x = 0
    g = eval_kernel("heat", t, spec)
    assert g.samples[0].max() == pytest.approx(1.0, rel=1e-9)


def test_heat_kernel_positive_and_unit_mass():
    for d in (1, 2, 3):
        t = 0.04
        margin = math.ceil(8 * math.sqrt(t))
        spec = GridSpec.centered(d, 2 * margin + 1, 16)
        g = eval_kernel("heat", t, spec)
        assert (g.samples > 0).all()
        mass = g.samples.sum() * spec.cell_volume
        assert mass == pytest.approx(1.0, abs=1e-8)


def test_grad_heat_zero_integral_and_component_count():
    spec = GridSpec.centered(2, 9, 16)
    g = eval_kernel("grad_heat", 0.04, spec)
    assert g.m == 2
    for c in range(2):
        assert abs(g.samples[c].sum() * spec.cell_volume) <= 1e-8


def test_phi_at_origin():
    for d in (1, 2, 3):
        for t in (0.25, 1.0, 4.0):
            spec = GridSpec((3,) * d, 31 if d == 1 else 5, (-1,) * d)
            phi = eval_kernel("phi", t, spec)
            # at the sample nearest the origin the majorant is near t^-(d+1)/2
            assert phi.samples.max() <= t ** (-(d + 1) / 2.0)
            assert phi.samples.max() >= (spec.h + math.sqrt(t)) ** (-(d + 1))


def test_kernel_rejects_bad_time():
    spec = GridSpec.centered(1, 3, 8)
    with pytest.raises(DomainError):
        eval_kernel("heat", 0.0, spec)
    with pytest.raises(DomainError):
        eval_kernel("nope", 1.0, spec)


def test_envelope_values():
    # both terms active at t = 1
    assert kernel_amalgam_bound("heat", 1.0, 2, 3, 3) == pytest.approx(2.0)
    # small-time majorant at p = 1 collapses to t^(-1/2)
    t = 0.1
    assert kernel_amalgam_bound("phi", t, 1, 2, 3) == pytest.approx(t ** -0.5)
    # derivative order adds t^(-1/2)
    t = 0.01
    d, p = 2, 4.0
    expect = t ** (-0.5 - d / 2.0 + d / (2 * p))
    assert kernel_amalgam_bound("heat", t, p, 2, d, h=1) == pytest.approx(expect)


def test_oseen_pointwise_bound_values():
    assert oseen_pointwise_bound([0.0, 0.0, 0.0], 1.0, 0, 0, 3) == pytest.approx(1.0)
    assert oseen_pointwise_bound([1.0, 0.0, 0.0], 1e-12, 1, 0, 3) == pytest.approx(1.0, rel=1e-5)
    assert oseen_pointwise_bound([0.0, 1.0, 0.0], 0.0, 0, 1, 3) == pytest.approx(1.0)


def test_grad_heat_below_phi_with_one_constant():
    # |grad Gamma| <= C Phi with the dimension constant from the scalar
    # maximisation of (rho/2)(4 pi)^(-d/2) e^(-rho^2/4) (1+rho)^(d+1)
    d = 2
    rho = np.linspace(0, 12, 4001)
    c_d = ((rho / 2) * (4 * math.pi) ** (-d / 2.0) * np.exp(-(rho ** 2) / 4.0) * (1 + rho) ** (d + 1)).max()
    spec = GridSpec.centered(d, 9, 16)
    for t in (0.05, 0.25, 1.0):
        grad = eval_kernel("grad_heat", t, spec)
        phi = eval_kernel("phi", t, spec)
        ratio = grad.magnitude() / phi.samples[0]
        assert ratio.max() <= c_d * (1 + 1e-9)


def test_oseen_tensor_obeys_pointwise_majorant():
    # ratio scan of the sampled tensor against the majorant over an (x, t)
    # grid, away from the periodic images
    spec = GridSpec.centered(2, 16, 8)
    coords = spec.coord_arrays()
    r = np.sqrt(sum(np.asarray(c) ** 2 for c in coords))
    interior = np.broadcast_to(r, spec.cells) <= 4.0
    ratios = []
    for t in (0.25, 1.0):
        S = eval_kernel("oseen", t, spec)
        mag = S.magnitude()
        bound = (np.broadcast_to(r, spec.cells) + math.sqrt(t)) ** (-2.0)
        ratios.append((mag[interior] / bound[interior]).max())
    assert max(ratios) < 10.0
    assert max(ratios) / min(ratios) < 5.0


def test_oseen_tensor_trace_mass():
    # the diagonal mass is set entirely by the k = 0 mode, which the
    # identity-mean convention fixes to the d x d identity
    spec = GridSpec.centered(2, 8, 8)
    S = eval_kernel("oseen", 0.5, spec)
    trace_mass = (S.samples[0] + S.samples[3]).sum() * spec.cell_volume
    assert trace_mass == pytest.approx(2.0, abs=1e-8)
