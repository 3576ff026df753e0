"""Runtime and memory benchmarking, plus grid-refinement error studies.

Timing and allocation tracking run as separate passes over fresh fields:
tracemalloc slows allocation-heavy code down enough to contaminate wall
times, and timing loops would inflate the traced peak with measurement
bookkeeping.  Both passes step the exact same configuration, so the fields
they produce are interchangeable.
"""

from __future__ import annotations

import gc
import time
import tracemalloc
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .driver import (
    ProblemSpec,
    RunConfig,
    initialize,
    make_grid,
    method_label,
    parse_method,
    run,
    strang_step,
)
from .evaluate import evaluate_on_grid
from .field import DEFAULT_STRATEGY
from .grid import DG, SPLINE


@dataclass(frozen=True)
class BenchResult:
    method: str
    dof: int
    layout: str
    workers: int
    time_per_step_s: float
    peak_bytes: int


@dataclass(frozen=True)
class ConvergencePoint:
    method: str
    dof: int
    t: float
    error_inf_rel: float


def bench_step(config: RunConfig, steps: int = 5, warmup: int = 2) -> BenchResult:
    """Median per-step wall time and peak traced bytes for one setup."""
    if steps < 3:
        raise ValueError("need at least 3 timed steps for a stable median")
    grid = config.grid
    layout = config.layout or DEFAULT_STRATEGY[grid.method]

    field = initialize(config.problem, grid, strategy=layout, cache_block=config.cache_block)
    for _ in range(warmup):
        field = strang_step(field, config.tau, workers=config.workers, consume=True)
    samples = []
    for _ in range(steps):
        t0 = time.perf_counter()
        field = strang_step(field, config.tau, workers=config.workers, consume=True)
        samples.append(time.perf_counter() - t0)
    del field

    gc.collect()
    tracemalloc.start()
    try:
        field = initialize(config.problem, grid, strategy=layout, cache_block=config.cache_block)
        for _ in range(2):
            field = strang_step(field, config.tau, workers=config.workers, consume=True)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    del field

    return BenchResult(
        method=method_label(grid),
        dof=grid.dof(0),
        layout=layout,
        workers=config.workers,
        time_per_step_s=float(np.median(samples)),
        peak_bytes=int(peak),
    )


def compare_backends(
    config: RunConfig,
    steps: int = 5,
    warmup: int = 2,
    backends: Sequence[str] | None = None,
) -> list[tuple[str, BenchResult]]:
    """Run :func:`bench_step` once per kernel backend on the same setup.

    Returns ``(backend, result)`` pairs in the order benchmarked; by default
    every built backend, alphabetically (compiled first when present).  The
    backend that was active on entry is restored afterwards, including when a
    backend name is rejected mid-run.
    """
    if backends is None:
        backends = kernels.available_backends()
    previous = kernels.backend_name()
    results: list[tuple[str, BenchResult]] = []
    try:
        for name in backends:
            kernels.set_backend(name)
            results.append((name, bench_step(config, steps=steps, warmup=warmup)))
    finally:
        kernels.set_backend(previous)
    return results


def convergence_study(
    problem: ProblemSpec,
    methods: Sequence[str],
    dofs: Sequence[int],
    t_eval: Sequence[float],
    reference_dof: int,
    tau: float = 0.1,
    workers: int = 1,
    cache_block: int = 8,
) -> list[ConvergencePoint]:
    """Relative max-norm error of every method/dof pair against one fine
    spline reference, at each requested time.

    Coarse solutions are evaluated at the reference's own points, so no
    interpolation error is charged to the reference side.
    """
    dofs = [int(d) for d in dofs]
    t_eval = sorted(float(t) for t in t_eval)
    if not t_eval:
        raise ValueError("t_eval must not be empty")
    if reference_dof < 4 * max(dofs):
        raise ValueError(
            f"reference dof {reference_dof} is too coarse; need >= {4 * max(dofs)} "
            "(4x the finest study grid)"
        )
    t_end = t_eval[-1]
    nsteps = max(1, round(t_end / tau))

    ref_grid = make_grid(problem, SPLINE, reference_dof)
    ref_cfg = RunConfig(
        problem=problem,
        grid=ref_grid,
        tau=tau,
        t_end=t_end,
        workers=workers,
        cache_block=cache_block,
        diag_every=nsteps,
        snapshot_times=tuple(t_eval),
    )
    _, ref_snaps = run(ref_cfg)
    ref_points = [ref_grid.axis_points(a) for a in range(ref_grid.ndim)]
    reference = {t: f.array for t, f in ref_snaps}
    scale = {t: float(np.max(np.abs(v))) for t, v in reference.items()}

    points: list[ConvergencePoint] = []
    for name in methods:
        method, degree = parse_method(name)
        for dof in dofs:
            grid = make_grid(problem, method, dof, dg_order=degree + 1 if method == DG else 0)
            cfg = RunConfig(
                problem=problem,
                grid=grid,
                tau=tau,
                t_end=t_end,
                workers=workers,
                cache_block=cache_block,
                diag_every=nsteps,
                snapshot_times=tuple(t_eval),
            )
            _, snaps = run(cfg)
            for t, f in snaps:
                vals = evaluate_on_grid(f, ref_points)
                err = float(np.max(np.abs(vals - reference[t]))) / scale[t]
                points.append(ConvergencePoint(name, grid.dof(0), float(t), err))
    return points


def matched_dof_ratios(
    points: Sequence[ConvergencePoint], method: str, baseline: str, t: float
) -> list[tuple[float, float]]:
    """Resolution ratios at matched error, method dof over baseline dof.

    For each baseline point whose error lies inside the method's sampled
    error range, the method curve is interpolated log-log to the dof at
    which it reaches the same error.  Ratios above one mean `method` needs
    that many times more points per direction than `baseline`.
    """
    mcurve = sorted(
        (p.error_inf_rel, p.dof) for p in points if p.method == method and p.t == t
    )
    base = [(p.dof, p.error_inf_rel) for p in points if p.method == baseline and p.t == t]
    if len(mcurve) < 2 or not base:
        return []
    errs = np.log10([e for e, _ in mcurve])
    dof_at = np.log10([d for _, d in mcurve])
    out = []
    for dof_b, err_b in sorted(base):
        if err_b <= 0.0 or not mcurve[0][0] <= err_b <= mcurve[-1][0]:
            continue
        need = 10.0 ** float(np.interp(np.log10(err_b), errs, dof_at))
        out.append((err_b, need / dof_b))
    return out
