"""Density reduction, spectral field solve, and electric energy."""

from __future__ import annotations

import numpy as np
import pytest

from slvp import (
    Axis,
    DensityField,
    DistributionField,
    ElectricField,
    GridSpec,
    compute_density,
    electric_energy,
    solve_poisson,
)
from slvp.grid import SPACE, VELOCITY
from slvp.poisson import DirectDFT, NumpyDFT


def grid_2x2v(nx: int, nv: int, length: float, method: str = "spline", degree: int = 0) -> GridSpec:
    return GridSpec(
        (
            Axis(0.0, length, nx, SPACE),
            Axis(0.0, length, nx, SPACE),
            Axis(-6.0, 6.0, nv, VELOCITY),
            Axis(-6.0, 6.0, nv, VELOCITY),
        ),
        method,
        degree,
    )


def grid_1x1v(nx: int, nv: int, length: float, method: str = "spline", degree: int = 0) -> GridSpec:
    return GridSpec(
        (Axis(0.0, length, nx, SPACE), Axis(-6.0, 6.0, nv, VELOCITY)),
        method,
        degree,
    )


def spatial_mesh(grid: GridSpec):
    pts = [grid.axis_points(a) for a in grid.space_axes]
    if len(pts) == 1:
        return (pts[0],)
    return (pts[0][:, None], pts[1][None, :])


def test_density_of_maxwellian_is_one():
    grid = grid_2x2v(4, 64, 4.0 * np.pi)
    v1 = grid.axis_points(2)
    v2 = grid.axis_points(3)
    maxwell = np.exp(-0.5 * (v1[:, None] ** 2 + v2[None, :] ** 2)) / (2.0 * np.pi)
    values = np.broadcast_to(maxwell[None, None, :, :], (4, 4, 64, 64))
    rho = compute_density(DistributionField.from_values(grid, values)).values
    assert rho.shape == (4, 4)
    assert np.abs(rho - 1.0).max() <= 1e-7


def test_density_of_zero_is_zero():
    grid = grid_1x1v(8, 16, 2.0)
    rho = compute_density(DistributionField.zeros(grid)).values
    assert np.array_equal(rho, np.zeros(8))


def test_density_of_nodal_indicator_is_weight_product():
    grid = grid_2x2v(4, 8, 4.0, method="dg", degree=1)
    values = np.zeros((8, 8, 16, 16))
    values[:, :, 5, 11] = 1.0
    rho = compute_density(DistributionField.from_values(grid, values)).values
    expected = grid.axis_weights(2)[5] * grid.axis_weights(3)[11]
    np.testing.assert_allclose(rho, expected, rtol=1e-14)


def test_poisson_single_mode_1d():
    grid = grid_1x1v(64, 8, 4.0 * np.pi)
    (x,) = spatial_mesh(grid)
    rho = 1.0 + 0.5 * np.cos(0.5 * x)
    field = solve_poisson(DensityField(grid, rho))
    assert len(field.components) == 1
    assert np.abs(field.components[0] - np.sin(0.5 * x)).max() <= 1e-12


def test_poisson_single_mode_2d():
    grid = grid_2x2v(64, 4, 4.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    rho = 1.0 + 0.5 * np.cos(0.5 * x1) + np.zeros_like(x2)
    field = solve_poisson(DensityField(grid, rho))
    assert np.abs(field.components[0] - np.sin(0.5 * x1)).max() <= 1e-12
    assert np.abs(field.components[1]).max() <= 1e-12


def test_poisson_uniform_density_gives_zero_field():
    grid = grid_2x2v(16, 4, 4.0 * np.pi)
    rho = np.ones((16, 16))
    field = solve_poisson(DensityField(grid, rho))
    for comp in field.components:
        assert np.abs(comp).max() <= 1e-14


def test_poisson_two_mode_product_2d():
    eps, k = 1e-3, 0.2
    grid = grid_2x2v(50, 4, 10.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    rho = 1.0 + eps * np.cos(k * x1) * np.cos(k * x2)
    field = solve_poisson(DensityField(grid, rho))
    e1 = (eps / (2.0 * k)) * np.sin(k * x1) * np.cos(k * x2)
    e2 = (eps / (2.0 * k)) * np.cos(k * x1) * np.sin(k * x2)
    assert np.abs(field.components[0] - e1).max() <= 1e-12
    assert np.abs(field.components[1] - e2).max() <= 1e-12


def test_poisson_direct_dft_matches_fft():
    grid = grid_2x2v(12, 4, 4.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    rho = 1.0 + 0.3 * np.cos(0.5 * x1) * np.cos(x2) + 0.1 * np.sin(x1)
    fast = solve_poisson(DensityField(grid, rho), dft=NumpyDFT())
    slow = solve_poisson(DensityField(grid, rho), dft=DirectDFT())
    for a, b in zip(fast.components, slow.components):
        assert np.abs(a - b).max() <= 1e-12


def test_poisson_divergence_and_curl_identities():
    rng = np.random.default_rng(21)
    grid = grid_2x2v(16, 4, 4.0 * np.pi)
    # random smooth neutral density from a handful of low modes
    x1, x2 = spatial_mesh(grid)
    rho = np.ones((16, 16))
    for m1, m2 in ((1, 0), (0, 1), (1, 1), (2, 1)):
        c, s = rng.uniform(-0.1, 0.1, 2)
        rho = rho + c * np.cos(0.5 * (m1 * x1 + m2 * x2)) + s * np.sin(0.5 * (m1 * x1 + m2 * x2))
    field = solve_poisson(DensityField(grid, rho))
    e1hat = np.fft.fft2(field.components[0])
    e2hat = np.fft.fft2(field.components[1])
    rhohat = np.fft.fft2(rho - 1.0)
    k = 2.0 * np.pi * np.fft.fftfreq(16, d=grid.axes[0].h)
    k1 = k[:, None]
    k2 = k[None, :]
    div = 1j * k1 * e1hat + 1j * k2 * e2hat
    scale = np.abs(rhohat).max()
    assert np.abs(div - rhohat).max() / scale <= 1e-12
    curl = 1j * k1 * e2hat - 1j * k2 * e1hat
    assert np.abs(curl).max() / scale <= 1e-12


def test_poisson_field_has_zero_mean():
    grid = grid_2x2v(16, 4, 4.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    rho = 1.0 + 0.25 * np.cos(0.5 * x1) * np.sin(x2)
    field = solve_poisson(DensityField(grid, rho))
    w1 = grid.axis_weights(0)
    w2 = grid.axis_weights(1)
    measure = (4.0 * np.pi) ** 2
    for comp in field.components:
        total = float(np.einsum("ab,a,b->", comp, w1, w2))
        assert abs(total) <= 1e-12 * measure


def test_poisson_warns_on_non_neutral_density():
    grid = grid_1x1v(16, 4, 4.0 * np.pi)
    rho = np.full(16, 1.5)
    with pytest.warns(RuntimeWarning, match="unit background"):
        field = solve_poisson(DensityField(grid, rho))
    # the k=0 mode is dropped, so the offset changes nothing
    assert np.abs(field.components[0]).max() <= 1e-13


def test_poisson_is_quiet_for_neutral_density():
    grid = grid_1x1v(16, 4, 4.0 * np.pi)
    (x,) = spatial_mesh(grid)
    rho = 1.0 + 0.5 * np.cos(0.5 * x)
    import warnings as _w

    with _w.catch_warnings():
        _w.simplefilter("error")
        solve_poisson(DensityField(grid, rho))


def test_poisson_dg_coupling_single_mode():
    # cell-centre collapse, spectral solve, trig evaluation back at the
    # Gauss nodes; degree 5 on 64 cells puts the midpoint interpolation
    # error below 1e-11
    grid = grid_1x1v(64, 4, 4.0 * np.pi, method="dg", degree=5)
    (x,) = spatial_mesh(grid)
    rho = 1.0 + 0.5 * np.cos(0.5 * x)
    field = solve_poisson(DensityField(grid, rho))
    assert np.abs(field.components[0] - np.sin(0.5 * x)).max() <= 1e-11


def test_poisson_dg_coupling_converges_with_degree():
    errs = []
    for degree in (1, 3, 5):
        grid = grid_1x1v(32, 4, 4.0 * np.pi, method="dg", degree=degree)
        (x,) = spatial_mesh(grid)
        rho = 1.0 + 0.5 * np.cos(0.5 * x)
        field = solve_poisson(DensityField(grid, rho))
        errs.append(np.abs(field.components[0] - np.sin(0.5 * x)).max())
    assert errs[0] > errs[1] > errs[2]


def test_electric_energy_single_mode():
    grid = grid_2x2v(64, 4, 4.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    e1 = np.sin(0.5 * x1) + np.zeros_like(x2)
    e2 = np.zeros((64, 64))
    energy = electric_energy(ElectricField(grid, (e1, e2)))
    assert energy == pytest.approx(4.0 * np.pi**2, rel=1e-12)


def test_electric_energy_zero_field():
    grid = grid_1x1v(8, 4, 2.0)
    assert electric_energy(ElectricField(grid, (np.zeros(8),))) == 0.0


def test_electric_energy_two_stream_initial_value():
    eps, k = 1e-3, 0.2
    grid = grid_2x2v(40, 4, 10.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    rho = 1.0 + eps * np.cos(k * x1) * np.cos(k * x2)
    energy = electric_energy(solve_poisson(DensityField(grid, rho)))
    expected = 25.0 * np.pi**2 * eps**2 / (4.0 * k**2)
    assert energy == pytest.approx(expected, rel=1e-11)


def test_electric_energy_translation_invariant():
    grid = grid_2x2v(32, 4, 4.0 * np.pi)
    x1, x2 = spatial_mesh(grid)
    rho = 1.0 + 0.5 * np.cos(0.5 * x1) + 0.2 * np.sin(x2)
    base = electric_energy(solve_poisson(DensityField(grid, rho)))
    for roll in (1, 7):
        shifted = np.roll(rho, roll, axis=0)
        moved = electric_energy(solve_poisson(DensityField(grid, shifted)))
        assert moved == pytest.approx(base, rel=1e-12)
