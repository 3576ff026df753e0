"""Semi-Lagrangian discontinuous Galerkin advection on periodic 1D lines.

Each cell of width ``h`` carries a polynomial of degree ``degree`` stored as
nodal values at Gauss-Legendre points scaled to [0, 1).  Advecting by a
constant shift translates the piecewise polynomial exactly and then projects
it back onto the broken polynomial space.  Because the translated polynomial
restricted to a target cell is piecewise polynomial with a single interior
break, the projection touches exactly two source cells: writing
``shift / h = q + alpha`` with ``q = floor(shift / h)`` and ``alpha`` in
[0, 1), output cell ``i`` combines source cells ``i* = i - q - 1`` and
``i* + 1`` through a pair of (degree+1) x (degree+1) matrices that depend
only on ``alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels as kr


@lru_cache(maxsize=None)
def _gauss_cached(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on (0, 1); weights sum to one."""
    if not 1 <= order <= 16:
        raise ValueError(f"gauss order must be in [1, 16], got {order}")
    return _gauss_cached(order)


def _legendre_values(degree: int, x: np.ndarray) -> np.ndarray:
    """L2(0,1)-orthonormal Legendre polynomials evaluated at ``x``.

    Returns shape ``(degree + 1,) + x.shape``.  Uses the three-term
    recurrence, which stays stable for all supported degrees.
    """
    x = np.asarray(x, dtype=float)
    t = 2.0 * x - 1.0
    out = np.empty((degree + 1,) + t.shape)
    out[0] = 1.0
    if degree >= 1:
        out[1] = t
    for k in range(1, degree):
        out[k + 1] = ((2 * k + 1) * t * out[k] - k * out[k - 1]) / (k + 1)
    scale = np.sqrt(2.0 * np.arange(degree + 1) + 1.0)
    return out * scale.reshape((-1,) + (1,) * t.ndim)


def _barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / diff.prod(axis=1)


def _lagrange_values(nodes: np.ndarray, bary: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Lagrange basis on ``nodes`` evaluated at ``x`` via the barycentric form.

    Returns shape ``(len(nodes),) + x.shape``.  Points that coincide with a
    node exactly get the exact unit row.
    """
    x = np.asarray(x, dtype=float)
    shape = (-1,) + (1,) * x.ndim
    diff = x[None, ...] - nodes.reshape(shape)
    hit = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = bary.reshape(shape) / diff
        vals = ratio / ratio.sum(axis=0, keepdims=True)
    any_hit = hit.any(axis=0)
    if any_hit.any():
        vals = np.where(any_hit[None, ...], hit.astype(float), vals)
    return vals


@dataclass(frozen=True)
class ProjectionPair:
    """Update matrices for one constant-shift dG advection.

    ``a`` acts on source cell ``i* = i - cell_offset - 1`` and ``b`` on cell
    ``i* + 1``.  ``alpha`` is the fractional cell offset in [0, 1).
    """

    a: np.ndarray
    b: np.ndarray
    cell_offset: int
    alpha: float


def projection_pairs(
    shifts: np.ndarray, h: float, degree: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Build update matrices for a batch of shifts.

    Returns ``(a, b, q, alpha)`` with ``a``/``b`` of shape (len(shifts),
    degree+1, degree+1).  Every quadrature below integrates a polynomial of
    degree <= 2*degree, so the (degree+1)-point Gauss rule on each
    subinterval is exact.
    """
    if h <= 0.0:
        raise ValueError(f"cell width must be positive, got {h}")
    if not 0 <= degree <= 8:
        raise ValueError(f"degree must be in [0, 8], got {degree}")
    shifts = np.ascontiguousarray(np.asarray(shifts, dtype=float).ravel())
    p = degree + 1

    s = shifts / h
    qf = np.floor(s)
    alpha = s - qf
    # The fractional part can round up to exactly 1.0 for s slightly below
    # an integer; fold that back into the whole-cell offset.
    carry = alpha >= 1.0
    qf[carry] += 1.0
    alpha[carry] = 0.0
    q = qf.astype(np.int64)

    nodes, w = gauss_nodes(p)
    bary = _barycentric_weights(nodes)
    phi_nodes = _legendre_values(degree, nodes)  # phi_nodes[k, j] = phi_k(xi_j)

    a = np.zeros((len(s), p, p))
    b = np.empty((len(s), p, p))
    b[:] = np.eye(p)

    live = np.flatnonzero(alpha > 0.0)
    if live.size:
        al = alpha[live][:, None]  # (t, 1)
        # a: integral over [0, alpha), source argument xi + 1 - alpha
        pts = al * nodes[None, :]  # (t, g)
        phi = _legendre_values(degree, pts)  # (k, t, g)
        lag = _lagrange_values(nodes, bary, pts + (1.0 - al))  # (m, t, g)
        inner = np.einsum("g,ktg,mtg->tkm", w, phi, lag, optimize=False)
        inner *= al[:, :, None]
        a[live] = np.einsum("kj,tkm->tjm", phi_nodes, inner, optimize=False)
        # b: integral over [alpha, 1), source argument xi - alpha
        pts = al + (1.0 - al) * nodes[None, :]
        phi = _legendre_values(degree, pts)
        lag = _lagrange_values(nodes, bary, pts - al)
        inner = np.einsum("g,ktg,mtg->tkm", w, phi, lag, optimize=False)
        inner *= (1.0 - al)[:, :, None]
        b[live] = np.einsum("kj,tkm->tjm", phi_nodes, inner, optimize=False)

    return a, b, q, alpha


def projection_pair(shift: float, h: float, degree: int) -> ProjectionPair:
    """Update matrices for a single shift; see :func:`projection_pairs`."""
    a, b, q, alpha = projection_pairs(np.array([shift]), h, degree)
    return ProjectionPair(a=a[0], b=b[0], cell_offset=int(q[0]), alpha=float(alpha[0]))


def advect_line_dg(line: np.ndarray, shift: float, h: float, degree: int) -> np.ndarray:
    """Advect one periodic dG line of nodal values by a constant shift.

    ``line`` holds cell-major, node-minor values; its length must be a
    multiple of ``degree + 1``.  A whole-cell shift (alpha == 0) reduces to
    an exact circular shift of cells.
    """
    line = np.ascontiguousarray(line, dtype=float)
    p = degree + 1
    if line.ndim != 1 or line.size % p:
        raise ValueError(f"line length {line.size} is not a multiple of {p}")
    a, b, q, alpha = projection_pairs(np.array([shift]), h, degree)
    idx = np.zeros(1, dtype=np.int64)
    out = kr.dg_sweep_contig(line[None, :], idx, a, b, q, alpha, line.size // p, p, 1)
    return out[0]


class DGAdvection:
    """Sweep kernel advecting dG lines by table-driven per-line shifts.

    One projection pair is precomputed per table entry, so a sweep whose
    shift depends on, say, a velocity node or a spatial field builds each
    distinct pair once instead of once per line.
    """

    def __init__(
        self,
        shift_table: np.ndarray,
        table_axes: tuple[int, ...],
        h: float,
        degree: int,
        workers: int = 1,
    ):
        self.table_axes = tuple(table_axes)
        self.h = float(h)
        self.degree = int(degree)
        self.workers = int(workers)
        table = np.ascontiguousarray(np.asarray(shift_table, dtype=float).ravel())
        self._stacks = projection_pairs(table, self.h, self.degree)

    def run_contig(self, lines: np.ndarray, idx: np.ndarray) -> np.ndarray:
        a, b, q, alpha = self._stacks
        p = self.degree + 1
        return kr.dg_sweep_contig(lines, idx, a, b, q, alpha, lines.shape[1] // p, p, self.workers)

    def run_strided(self, view: np.ndarray, idx: np.ndarray, block: int) -> None:
        a, b, q, alpha = self._stacks
        p = self.degree + 1
        kr.dg_sweep_strided(view, idx, a, b, q, alpha, view.shape[-1] // p, p, block, self.workers)
