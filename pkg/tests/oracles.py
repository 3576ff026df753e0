"""Independent reference implementations the kernel tests compare against.

Everything here trades speed for obviousness: dense linear algebra instead
of structured solves, brute-force sampling instead of closed-form matrices,
high-resolution composite quadrature instead of exact rules.  Frozen
literals in the test modules were generated from these functions.
"""

from __future__ import annotations

import numpy as np


def dense_cyclic_spline(values: np.ndarray) -> np.ndarray:
    """Solve (1/6) * cyclic_tridiag(1, 4, 1) * w = values with a dense solver."""
    values = np.asarray(values, dtype=float)
    n = values.size
    mat = np.zeros((n, n))
    for i in range(n):
        mat[i, i] = 4.0 / 6.0
        mat[i, (i - 1) % n] = 1.0 / 6.0
        mat[i, (i + 1) % n] = 1.0 / 6.0
    return np.linalg.solve(mat, values)


def _gauss01(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _piecewise_poly_eval(line: np.ndarray, degree: int, h: float, x: np.ndarray) -> np.ndarray:
    """Evaluate the broken polynomial defined by dG nodal data at points x.

    ``line`` is cell-major, node-minor on a periodic domain of ``ncells * h``.
    Each cell's polynomial is recovered by a dense Vandermonde solve at the
    Gauss nodes, deliberately avoiding the library's basis machinery.
    """
    p = degree + 1
    ncells = line.size // p
    nodes, _ = _gauss01(p)
    vand = np.vander(nodes, p, increasing=True)
    coeffs = np.linalg.solve(vand, line.reshape(ncells, p).T).T  # (ncells, p)
    length = ncells * h
    xw = np.mod(x, length)
    cell = np.minimum((xw / h).astype(np.int64), ncells - 1)
    local = xw / h - cell
    out = np.zeros_like(xw)
    for c in range(ncells):
        sel = cell == c
        if sel.any():
            out[sel] = np.polynomial.polynomial.polyval(local[sel], coeffs[c])
    return out


def dg_advect_oracle(
    line: np.ndarray, shift: float, h: float, degree: int, panels: int = 2000
) -> np.ndarray:
    """Brute-force semi-Lagrangian dG update.

    Translates the broken polynomial by ``shift``, samples it densely
    (``panels`` composite 5-point Gauss panels per cell, 10^4 points for the
    default), and recovers each target cell's polynomial by weighted least
    squares in the monomial basis.  Output is nodal values at Gauss points.
    """
    line = np.asarray(line, dtype=float)
    p = degree + 1
    ncells = line.size // p
    nodes, _ = _gauss01(p)

    gx, gw = _gauss01(5)
    # The translated function has one derivative break per cell at local
    # coordinate alpha; pin it to a panel edge so every panel is smooth.
    alpha = shift / h - np.floor(shift / h)
    edges = np.union1d(np.linspace(0.0, 1.0, panels + 1), [alpha])
    pts = edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * gx[None, :]
    wts = ((edges[1:] - edges[:-1])[:, None] * gw[None, :]).ravel()
    pts = pts.ravel()

    design = np.vander(pts, p, increasing=True) * np.sqrt(wts)[:, None]
    nodal_vand = np.vander(nodes, p, increasing=True)

    out = np.empty_like(line).reshape(ncells, p)
    for c in range(ncells):
        src = (c + pts) * h - shift
        samples = _piecewise_poly_eval(line, degree, h, src)
        coeff, *_ = np.linalg.lstsq(design, samples * np.sqrt(wts), rcond=None)
        out[c] = nodal_vand @ coeff
    return out.ravel()


def quadratic_through_nodes(nodes: np.ndarray, values: np.ndarray, at: float) -> float:
    """Value at ``at`` of the parabola through three (node, value) pairs."""
    coeff = np.linalg.solve(np.vander(nodes, 3, increasing=True), values)
    return float(coeff[0] + coeff[1] * at + coeff[2] * at * at)


def quadrature_1d(f, lower: float, upper: float, panels: int = 400) -> float:
    """Composite 10-point Gauss quadrature, accurate far past 1e-13 here."""
    gx, gw = _gauss01(10)
    edges = np.linspace(lower, upper, panels + 1)
    width = edges[1:] - edges[:-1]
    pts = edges[:-1, None] + width[:, None] * gx[None, :]
    return float(np.sum(width[:, None] * gw[None, :] * f(pts)))
