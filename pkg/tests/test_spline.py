"""Cubic-spline line advection against dense-solve and analytic oracles."""

from __future__ import annotations

import numpy as np
import pytest

from slvp import advect_line_spline, build_spline
from slvp.spline import bspline_kernel

from oracles import dense_cyclic_spline

# Dense solve of the 4x4 cyclic system for the unit impulse (frozen from
# oracles.dense_cyclic_spline), exact value (1.75, -0.5, 0.25, -0.5).
IMPULSE_N4 = [1.7499999999999998, -0.5, 0.25, -0.5]


def test_bspline_kernel_reference_values():
    h = 0.7
    assert bspline_kernel(0.0, h) == pytest.approx(4.0 / 6.0, abs=1e-15)
    assert bspline_kernel(h, h) == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert bspline_kernel(-h, h) == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert bspline_kernel(2.0 * h, h) == 0.0
    assert bspline_kernel(-2.0 * h, h) == 0.0
    assert bspline_kernel(3.5 * h, h) == 0.0
    # hand evaluation at the inner-piece midpoint: (4 - 1.5 + 0.375)/6
    assert bspline_kernel(0.5 * h, h) == pytest.approx(2.875 / 6.0, abs=1e-15)


def test_bspline_kernel_rejects_bad_spacing():
    with pytest.raises(ValueError):
        bspline_kernel(0.0, 0.0)


def test_build_spline_constant_gives_constant_weights():
    coeffs = build_spline(np.full(9, 3.25), h=0.5)
    np.testing.assert_allclose(coeffs.weights, 3.25, rtol=1e-14)


def test_build_spline_impulse_matches_dense_solve():
    got = build_spline(np.array([1.0, 0.0, 0.0, 0.0]), h=1.0).weights
    np.testing.assert_allclose(got, IMPULSE_N4, rtol=0, atol=1e-13)
    live = dense_cyclic_spline(np.array([1.0, 0.0, 0.0, 0.0]))
    np.testing.assert_allclose(got, live, rtol=0, atol=1e-13)


@pytest.mark.parametrize("n", [8, 16, 64])
def test_build_spline_matches_dense_solve(n):
    rng = np.random.default_rng(100 + n)
    u = rng.standard_normal(n)
    got = build_spline(u, h=0.25).weights
    ref = dense_cyclic_spline(u)
    assert np.abs(got - ref).max() <= 1e-12


@pytest.mark.parametrize("n", [8, 32, 128])
def test_build_spline_residual_small_for_sine(n):
    x = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    u = np.sin(x)
    w = build_spline(u, h=x[1]).weights
    residual = (np.roll(w, 1) + 4.0 * w + np.roll(w, -1)) / 6.0 - u
    assert np.abs(residual).max() < 1e-13 * np.abs(u).max()


def test_build_spline_reconstructs_input_at_nodes():
    rng = np.random.default_rng(7)
    u = rng.standard_normal(17)
    w = build_spline(u, h=1.0).weights
    recon = (np.roll(w, 1) + 4.0 * w + np.roll(w, -1)) / 6.0
    assert np.abs(recon - u).max() <= 1e-13 * np.abs(u).max()


def test_build_spline_rejects_short_input():
    with pytest.raises(ValueError):
        build_spline(np.ones(3), h=1.0)


def test_coefficients_evaluate_nodes_and_wrap():
    rng = np.random.default_rng(11)
    u = rng.standard_normal(12)
    h = 0.5
    coeffs = build_spline(u, h=h, x0=2.0)
    x = 2.0 + h * np.arange(12)
    np.testing.assert_allclose(coeffs(x), u, rtol=0, atol=1e-13)
    # one full period away evaluates identically
    np.testing.assert_allclose(coeffs(x + 12 * h), u, rtol=0, atol=1e-12)


def test_advect_zero_shift_round_trips():
    rng = np.random.default_rng(3)
    u = rng.standard_normal(32)
    out = advect_line_spline(u, shift=0.0, h=0.1)
    assert np.abs(out - u).max() <= 1e-13 * np.abs(u).max()


@pytest.mark.parametrize("m", [1, 3, -2, 13, -45])
def test_advect_integer_shift_is_circular(m):
    rng = np.random.default_rng(400 + abs(m))
    u = rng.standard_normal(16)
    h = 0.3
    out = advect_line_spline(u, shift=m * h, h=h)
    assert np.abs(out - np.roll(u, m)).max() <= 1e-13 * np.abs(u).max()


def test_advect_integer_shift_composition_exact():
    rng = np.random.default_rng(5)
    u = rng.standard_normal(20)
    h = 0.25
    once = advect_line_spline(u, shift=5 * h, h=h)
    composed = advect_line_spline(advect_line_spline(u, 2 * h, h), 3 * h, h)
    assert np.abs(once - composed).max() <= 1e-12 * np.abs(u).max()


@pytest.mark.parametrize("seed", range(5))
def test_advect_conserves_line_sum(seed):
    rng = np.random.default_rng(900 + seed)
    u = rng.standard_normal(48)
    shift = float(rng.uniform(-20.0, 20.0))
    out = advect_line_spline(u, shift=shift, h=0.2)
    assert abs(out.sum() - u.sum()) <= 1e-12 * max(1.0, abs(u.sum()))


def test_advect_huge_shift_wraps():
    rng = np.random.default_rng(17)
    u = rng.standard_normal(16)
    h = 0.5
    period = 16 * h
    base = advect_line_spline(u, shift=1.3, h=h)
    wrapped = advect_line_spline(u, shift=1.3 + 7 * period, h=h)
    assert np.abs(base - wrapped).max() <= 1e-11


def test_fourier_symbol_never_amplifies():
    n = 32
    h = 1.0
    x = h * np.arange(n)
    shift = 0.37
    for mode in range(n):
        re = advect_line_spline(np.cos(2 * np.pi * mode * x / (n * h)), shift, h)
        im = advect_line_spline(np.sin(2 * np.pi * mode * x / (n * h)), shift, h)
        amp = np.sqrt(re**2 + im**2).max()
        assert amp <= 1.0 + 1e-12


def test_fourth_order_on_sine():
    # Error ratio when n doubles should sit near 2^4 = 16.  The shift is a
    # third of the coarsest spacing so the fractional grid offset is 1/3 or
    # 2/3 at every resolution; those share the same error constant.
    length = 2.0 * np.pi
    shift = (length / 32) / 3.0
    errs = []
    for n in (32, 64, 128):
        h = length / n
        x = h * np.arange(n)
        out = advect_line_spline(np.sin(x), shift, h)
        errs.append(np.abs(out - np.sin(x - shift)).max())
    for coarse, fine in zip(errs, errs[1:]):
        assert 12.0 <= coarse / fine <= 20.0
