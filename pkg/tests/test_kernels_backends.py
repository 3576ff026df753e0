"""Backend selection and agreement between the compiled and NumPy kernels.

Contract: each backend agrees with itself bitwise across layout
strategies and worker counts; the two backends agree with each other to
rounding (a few ulp), not necessarily bitwise.
"""

import numpy as np
import pytest

from slvp import (
    DGAdvection,
    DistributionField,
    RunConfig,
    SplineAdvection,
    available_backends,
    backend_name,
    compare_backends,
    initialize,
    line_sweep,
    make_grid,
    problem_spec,
    set_backend,
    strang_step,
)

BACKENDS = available_backends()


@pytest.fixture(autouse=True)
def restore_backend():
    original = backend_name()
    yield
    set_backend(original)


def test_both_backends_are_built():
    assert set(BACKENDS) >= {"python", "compiled"}
    assert BACKENDS == tuple(sorted(BACKENDS))


def test_active_backend_is_available():
    assert backend_name() in BACKENDS


def test_set_backend_switches_and_rejects_unknown():
    set_backend("python")
    assert backend_name() == "python"
    set_backend("compiled")
    assert backend_name() == "compiled"
    with pytest.raises(ValueError, match="unknown backend 'fortran'"):
        set_backend("fortran")


def sweep_both_strategies(method, order, backend):
    set_backend(backend)
    prob = problem_spec("landau2d")
    grid = make_grid(prob, method, dofs=32, dg_order=order)
    rng = np.random.default_rng(7)
    vals = rng.standard_normal(tuple(grid.dof(a) for a in range(2)))
    shifts = rng.uniform(-2.0, 2.0, grid.dof(1))
    h = grid.axes[0].h
    if method == "spline":
        kern = SplineAdvection(shifts, (1,), h)
    else:
        kern = DGAdvection(shifts, (1,), h, grid.dg_degree)
    out = []
    for strategy in ("transpose", "strided"):
        f = DistributionField.from_values(grid, vals, strategy=strategy)
        out.append(line_sweep(f, 0, kern).array.copy())
    return out


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("method,order", [("spline", 0), ("dg", 4)])
def test_sweep_is_bitwise_identical_across_strategies(backend, method, order):
    a, b = sweep_both_strategies(method, order, backend)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("method,order", [("spline", 0), ("dg", 3)])
def test_step_is_bitwise_identical_across_worker_counts(backend, method, order):
    set_backend(backend)
    prob = problem_spec("landau2d")
    grid = make_grid(prob, method, dofs=32, dg_order=order)
    one = strang_step(initialize(prob, grid), 0.1, workers=1)
    four = strang_step(initialize(prob, grid), 0.1, workers=4)
    assert np.array_equal(one.array, four.array)


@pytest.mark.parametrize("method,order", [("spline", 0), ("dg", 3)])
def test_backends_agree_to_rounding(method, order):
    prob = problem_spec("landau2d")
    grid = make_grid(prob, method, dofs=32, dg_order=order)
    results = {}
    for backend in BACKENDS:
        set_backend(backend)
        results[backend] = strang_step(initialize(prob, grid), 0.1).array
    diff = np.max(np.abs(results["python"] - results["compiled"]))
    assert diff <= 1e-14


def bench_config(dofs=16):
    prob = problem_spec("landau2d")
    grid = make_grid(prob, "spline", dofs=dofs)
    return RunConfig(problem=prob, grid=grid, tau=0.1, t_end=1.0)


def test_compare_backends_times_every_built_backend():
    pairs = compare_backends(bench_config(), steps=3, warmup=1)
    assert [name for name, _ in pairs] == list(BACKENDS)
    first = pairs[0][1]
    for _, res in pairs:
        assert res.time_per_step_s > 0.0
        assert res.peak_bytes > 0
        assert (res.method, res.dof, res.layout, res.workers) == (
            first.method,
            first.dof,
            first.layout,
            first.workers,
        )


def test_compare_backends_honors_an_explicit_subset():
    pairs = compare_backends(bench_config(), steps=3, warmup=1, backends=("python",))
    assert [name for name, _ in pairs] == ["python"]


def test_compare_backends_restores_the_active_backend():
    set_backend("python")
    compare_backends(bench_config(), steps=3, warmup=1, backends=("compiled",))
    assert backend_name() == "python"
    with pytest.raises(ValueError, match="unknown backend"):
        compare_backends(
            bench_config(), steps=3, warmup=1, backends=("compiled", "rust")
        )
    assert backend_name() == "python"


def test_spline_backends_agree_bitwise():
    # the spline gather uses the same four-tap order in both backends
    prob = problem_spec("landau2d")
    grid = make_grid(prob, "spline", dofs=48)
    results = {}
    for backend in BACKENDS:
        set_backend(backend)
        results[backend] = strang_step(initialize(prob, grid), 0.1).array
    assert np.array_equal(results["python"], results["compiled"])
