"""Evaluate stored fields at arbitrary phase-space points.

Spline fields are evaluated through the tensor-product interpolating spline,
dG fields through the per-cell Lagrange polynomial.  Per axis, a query that
lands on a stored abscissa (within 1e-9 of a grid unit, to absorb round-off
in coordinate arithmetic) is snapped onto it; when every target along every
axis is node-exact the stored values are returned as-is, so evaluating a
field at its own points reproduces them exactly.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels as kr
from ._kernels_py import _eval_weights
from .dg import _barycentric_weights, _lagrange_values, gauss_nodes
from .field import DistributionField
from .grid import SPLINE, Axis

_SNAP = 1e-9  # index units


def _spline_axis_map(ax: Axis, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.mod((pts - ax.lower) / ax.h, ax.count)
    base = np.floor(u)
    theta = u - base
    snap_up = theta > 1.0 - _SNAP
    base[snap_up] += 1.0
    theta[snap_up] = 0.0
    theta[theta < _SNAP] = 0.0
    return base.astype(np.int64) % ax.count, theta


def _solve_axis(work: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(work, axis, -1)
    shape = moved.shape
    lines = np.ascontiguousarray(moved).reshape(-1, shape[-1])
    return np.moveaxis(kr.cyclic_solve_lines(lines).reshape(shape), -1, axis)


def _spline_axis_apply(
    work: np.ndarray, axis: int, base: np.ndarray, theta: np.ndarray
) -> np.ndarray:
    n = work.shape[axis]
    w0, w1, w2, w3 = _eval_weights(theta)
    bshape = [1] * work.ndim
    bshape[axis] = base.size
    out = w0.reshape(bshape) * np.take(work, (base - 1) % n, axis=axis)
    for w, off in ((w1, 0), (w2, 1), (w3, 2)):
        out += w.reshape(bshape) * np.take(work, (base + off) % n, axis=axis)
    return out


def _dg_axis_rows(ax: Axis, degree: int, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nodes, _ = gauss_nodes(degree + 1)
    u = np.mod((pts - ax.lower) / ax.h, ax.count)
    cell = np.floor(u)
    local = u - cell
    hit = np.abs(local[:, None] - nodes[None, :]) < _SNAP
    which = hit.argmax(axis=1)
    local = np.where(hit.any(axis=1), nodes[which], local)
    weights = _lagrange_values(nodes, _barycentric_weights(nodes), local).T
    return cell.astype(np.int64) % ax.count, weights


def _dg_axis_apply(
    work: np.ndarray, axis: int, cells: np.ndarray, weights: np.ndarray, nloc: int
) -> np.ndarray:
    moved = np.ascontiguousarray(np.moveaxis(work, axis, 0))
    shaped = moved.reshape((moved.shape[0] // nloc, nloc) + moved.shape[1:])
    picked = shaped[cells]  # (npts, nloc, rest...)
    out = np.einsum("tm,tm...->t...", weights, picked, optimize=False)
    return np.moveaxis(out, 0, axis)


def evaluate_on_grid(field: DistributionField, axis_points: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate on a tensor grid of per-axis target coordinates.

    Returns an array of shape ``(len(p) for p in axis_points)``.
    """
    grid = field.grid
    if len(axis_points) != grid.ndim:
        raise ValueError(f"expected {grid.ndim} coordinate arrays, got {len(axis_points)}")
    pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p in axis_points]
    work = field.array
    if grid.method == SPLINE:
        maps = [_spline_axis_map(grid.axes[a], pts[a]) for a in range(grid.ndim)]
        if all((theta == 0.0).all() for _, theta in maps):
            for a, (base, _) in enumerate(maps):
                work = np.take(work, base, axis=a)
            return work.copy()
        for a in range(grid.ndim):
            work = _solve_axis(work, a)
        for a, (base, theta) in enumerate(maps):
            work = _spline_axis_apply(work, a, base, theta)
        return work
    nloc = grid.nodes_per_cell
    for a in range(grid.ndim):
        cells, weights = _dg_axis_rows(grid.axes[a], grid.dg_degree, pts[a])
        work = _dg_axis_apply(work, a, cells, weights, nloc)
    return work


def evaluate_at(field: DistributionField, point: Sequence[float]) -> float:
    """Evaluate the discrete solution at one phase-space point."""
    singles = [np.array([c], dtype=float) for c in point]
    return float(evaluate_on_grid(field, singles).reshape(-1)[0])
