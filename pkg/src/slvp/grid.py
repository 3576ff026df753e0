"""Phase-space grids for 1x1v and 2x2v periodic Vlasov solvers.

An :class:`Axis` describes one periodic direction.  For the spline method the
axis carries ``count`` equispaced interpolation points; for the dG method it
carries ``count`` cells, each holding ``degree + 1`` Gauss-Legendre nodes.
Velocity axes are treated as periodic as well: the distribution function is
negligible at the velocity cutoff, so wrap-around transports only round-off
level mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dg import gauss_nodes

SPACE = "space"
VELOCITY = "velocity"

SPLINE = "spline"
DG = "dg"


@dataclass(frozen=True)
class Axis:
    """One periodic axis of the phase-space grid.

    ``count`` is the number of grid points (spline) or cells (dG).  The upper
    boundary is identified with the lower one and is not duplicated.
    """

    lower: float
    upper: float
    count: int
    kind: str

    def __post_init__(self) -> None:
        if not self.upper > self.lower:
            raise ValueError(f"axis needs upper > lower, got [{self.lower}, {self.upper}]")
        if self.count < 4:
            raise ValueError(f"axis count must be >= 4, got {self.count}")
        if self.kind not in (SPACE, VELOCITY):
            raise ValueError(f"unknown axis kind {self.kind!r}")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def h(self) -> float:
        """Spacing between points (spline) or cell width (dG)."""
        return (self.upper - self.lower) / self.count


@dataclass(frozen=True)
class GridSpec:
    """Tensor-product grid: space axes first, then velocity axes.

    Supported shapes are 1x1v (two axes) and 2x2v (four axes).  ``dg_degree``
    is the local polynomial degree and is ignored for the spline method.
    """

    axes: tuple[Axis, ...]
    method: str
    dg_degree: int = 0

    def __post_init__(self) -> None:
        if len(self.axes) not in (2, 4):
            raise ValueError(f"expected 2 or 4 axes, got {len(self.axes)}")
        nx = len(self.axes) // 2
        for i, ax in enumerate(self.axes):
            want = SPACE if i < nx else VELOCITY
            if ax.kind != want:
                raise ValueError(f"axis {i} must have kind {want!r}, got {ax.kind!r}")
        if self.method not in (SPLINE, DG):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == DG and not 0 <= self.dg_degree <= 8:
            raise ValueError(f"dg_degree must be in [0, 8], got {self.dg_degree}")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def ndim_x(self) -> int:
        return len(self.axes) // 2

    @property
    def space_axes(self) -> tuple[int, ...]:
        return tuple(range(self.ndim_x))

    @property
    def velocity_axes(self) -> tuple[int, ...]:
        return tuple(range(self.ndim_x, self.ndim))

    @property
    def nodes_per_cell(self) -> int:
        return self.dg_degree + 1 if self.method == DG else 1

    def dof(self, axis: int) -> int:
        """Number of degrees of freedom along ``axis``."""
        return self.axes[axis].count * self.nodes_per_cell

    @property
    def dofs(self) -> tuple[int, ...]:
        return tuple(self.dof(i) for i in range(self.ndim))

    @property
    def total_dof(self) -> int:
        return int(np.prod(self.dofs))

    @cached_property
    def _cell_nodes(self) -> np.ndarray:
        if self.method == SPLINE:
            return np.zeros(1)
        nodes, _ = gauss_nodes(self.dg_degree + 1)
        return nodes

    @cached_property
    def _cell_weights(self) -> np.ndarray:
        if self.method == SPLINE:
            return np.ones(1)
        _, weights = gauss_nodes(self.dg_degree + 1)
        return weights

    def axis_points(self, axis: int) -> np.ndarray:
        """Coordinates of the dofs along ``axis``, cell-major, node-minor."""
        ax = self.axes[axis]
        if self.method == SPLINE:
            return ax.lower + ax.h * np.arange(ax.count)
        cells = np.arange(ax.count)[:, None] + self._cell_nodes[None, :]
        return (ax.lower + ax.h * cells).ravel()

    def axis_weights(self, axis: int) -> np.ndarray:
        """Per-dof quadrature weights along ``axis`` (rectangle or Gauss)."""
        ax = self.axes[axis]
        if self.method == SPLINE:
            return np.full(ax.count, ax.h)
        return np.tile(ax.h * self._cell_weights, ax.count)
