"""Pure NumPy line-advection kernels (fallback backend).

The compiled extension in ``_kernels.pyx`` implements the same entry points.
Per-line arithmetic here is strictly elementwise across the batch dimension,
so a line's result does not depend on which other lines share its batch;
that is what makes the transpose and strided sweep strategies agree bitwise.
All einsum contractions stay non-optimized to pin the summation order.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Corner-corrected Thomas solve for (1/6) * cyclic_tridiag(1, 4, 1).
# The rank-one lift uses gamma = -4, which keeps the modified diagonal
# dominant (8 at the head, 4.25 at the tail).
_GAMMA = -4.0


@lru_cache(maxsize=None)
def _factors(n: int):
    diag = np.full(n, 4.0)
    diag[0] -= _GAMMA
    diag[-1] -= 1.0 / _GAMMA
    mult = np.zeros(n)
    denom = np.empty(n)
    denom[0] = diag[0]
    for i in range(1, n):
        mult[i] = 1.0 / denom[i - 1]
        denom[i] = diag[i] - mult[i]
    lift = np.zeros(n)
    lift[0] = _GAMMA
    lift[-1] = 1.0
    z = lift.copy()
    for i in range(1, n):
        z[i] -= mult[i] * z[i - 1]
    z[-1] /= denom[-1]
    for i in range(n - 2, -1, -1):
        z[i] -= z[i + 1]
        z[i] /= denom[i]
    sden = 1.0 + z[0] - 0.25 * z[-1]
    for arr in (mult, denom, z):
        arr.setflags(write=False)
    return mult, denom, z, sden


def cyclic_solve_lines(lines: np.ndarray) -> np.ndarray:
    """Solve (1/6) * cyclic_tridiag(1, 4, 1) @ w = line for each row."""
    lines = np.asarray(lines, dtype=float)
    if lines.ndim != 2:
        raise ValueError("expected a (lines, n) array")
    n = lines.shape[1]
    if n < 4:
        raise ValueError(f"need at least 4 samples per line, got {n}")
    mult, denom, z, sden = _factors(n)
    y = 6.0 * lines
    for i in range(1, n):
        y[:, i] -= mult[i] * y[:, i - 1]
    y[:, -1] /= denom[-1]
    for i in range(n - 2, -1, -1):
        y[:, i] -= y[:, i + 1]
        y[:, i] /= denom[i]
    fac = (y[:, 0] - 0.25 * y[:, -1]) / sden
    y -= fac[:, None] * z[None, :]
    return y


def _eval_weights(theta):
    """Four cubic B-spline values at fractional offset theta in [0, 1)."""
    omt = 1.0 - theta
    w0 = omt * omt * omt / 6.0
    w1 = (4.0 - 6.0 * theta * theta + 3.0 * theta * theta * theta) / 6.0
    w2 = (4.0 - 6.0 * omt * omt + 3.0 * omt * omt * omt) / 6.0
    w3 = theta * theta * theta / 6.0
    return w0, w1, w2, w3


def _spline_lines(lines: np.ndarray, shifts: np.ndarray, h: float) -> np.ndarray:
    """Spline-advect a batch of lines; two-phase solve then evaluate."""
    om = cyclic_solve_lines(lines)
    L, n = om.shape
    s = shifts / h
    off = np.floor(-s)
    theta = -s - off
    carry = theta >= 1.0
    off[carry] += 1.0
    theta[carry] = 0.0
    w0, w1, w2, w3 = _eval_weights(theta)
    base = (np.arange(n)[None, :] + (off.astype(np.int64) - 1)[:, None]) % n
    out = w0[:, None] * np.take_along_axis(om, base, axis=1)
    for w in (w1, w2, w3):
        base += 1
        base %= n
        out += w[:, None] * np.take_along_axis(om, base, axis=1)
    return out


def spline_sweep_contig(
    lines: np.ndarray, idx: np.ndarray, table: np.ndarray, h: float, threads: int
) -> np.ndarray:
    return _spline_lines(lines, table[idx], h)


def spline_sweep_strided(
    view: np.ndarray,
    idx: np.ndarray,
    table: np.ndarray,
    h: float,
    block: int,
    threads: int,
) -> None:
    shifts = table[idx]
    for sel, lines in _iter_blocks(view, block):
        out = _spline_lines(lines, shifts[sel], h)
        _scatter_block(view, sel, out)


def _dg_lines(
    lines: np.ndarray,
    pair_idx: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    q: np.ndarray,
    alpha: np.ndarray,
    ncells: int,
    nloc: int,
) -> np.ndarray:
    L, n = lines.shape
    out = np.empty_like(lines)
    cells = lines.reshape(L, ncells, nloc)
    ocells = out.reshape(L, ncells, nloc)
    qi = q[pair_idx]
    al = alpha[pair_idx]
    exact = al == 0.0
    rows = np.flatnonzero(exact)
    if rows.size:
        # Whole-cell shifts are exact circular shifts, bitwise.
        for qv in np.unique(qi[rows]):
            sel = rows[qi[rows] == qv]
            ocells[sel] = np.roll(cells[sel], int(qv), axis=1)
    rows = np.flatnonzero(~exact)
    if rows.size:
        qrows = qi[rows]
        for qv in np.unique(qrows):
            sel = rows[qrows == qv]
            src = cells[sel]
            lower = np.roll(src, int(qv) + 1, axis=1)  # source cell i - q - 1
            upper = np.roll(src, int(qv), axis=1)      # source cell i - q
            amat = a[pair_idx[sel]]
            bmat = b[pair_idx[sel]]
            ocells[sel] = np.einsum("tjm,tcm->tcj", amat, lower, optimize=False)
            ocells[sel] += np.einsum("tjm,tcm->tcj", bmat, upper, optimize=False)
    return out


def dg_sweep_contig(
    lines: np.ndarray,
    idx: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    q: np.ndarray,
    alpha: np.ndarray,
    ncells: int,
    nloc: int,
    threads: int,
) -> np.ndarray:
    return _dg_lines(lines, idx, a, b, q, alpha, ncells, nloc)


def dg_sweep_strided(
    view: np.ndarray,
    idx: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    q: np.ndarray,
    alpha: np.ndarray,
    ncells: int,
    nloc: int,
    block: int,
    threads: int,
) -> None:
    for sel, lines in _iter_blocks(view, block):
        out = _dg_lines(lines, idx[sel], a, b, q, alpha, ncells, nloc)
        _scatter_block(view, sel, out)


def _iter_blocks(view: np.ndarray, block: int):
    """Yield (row range, gathered contiguous copy) over a 4D strided view."""
    lead = view.shape[:-1]
    total = int(np.prod(lead))
    for r0 in range(0, total, block):
        sel = np.arange(r0, min(r0 + block, total))
        ii = np.unravel_index(sel, lead)
        yield sel, np.ascontiguousarray(view[ii[0], ii[1], ii[2], :])


def _scatter_block(view: np.ndarray, sel: np.ndarray, out: np.ndarray) -> None:
    ii = np.unravel_index(sel, view.shape[:-1])
    view[ii[0], ii[1], ii[2], :] = out
