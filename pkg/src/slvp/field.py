"""Distribution-function storage, layout strategies, line sweeps, snapshots.

A :class:`DistributionField` owns one C-contiguous block whose physical axis
order is tracked by a :class:`LayoutDescriptor`; ``field.array`` is always
the logical view with axes in grid order.  :func:`line_sweep` applies a 1D
kernel to every grid line along one axis under either strategy:

* ``transpose``: physically transpose so the sweep axis is contiguous, then
  run the kernel over the whole contiguous batch.  Costs a full-size buffer
  (plus the spline kernel's coefficient workspace) but streams perfectly.
* ``strided``: gather blocks of ``cache_block`` lines out of the strided
  array, run the kernel per block, scatter back in place.  No transpose
  buffer, so the working set stays one field.

Both strategies feed the identical per-line arithmetic, so their results
agree bitwise, and lines are independent, so worker counts cannot change
results either.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import DG, SPACE, SPLINE, VELOCITY, Axis, GridSpec

TRANSPOSE = "transpose"
STRIDED = "strided"

# Conventional sweep strategy per method: the spline solve wants long
# contiguous lines, the dG cell update is local enough to work in place.
DEFAULT_STRATEGY = {SPLINE: TRANSPOSE, DG: STRIDED}


@dataclass(frozen=True)
class LayoutDescriptor:
    """Physical memory order of a field.

    ``dim_order`` lists grid axes from slowest-varying to fastest-varying;
    ``strides`` gives each grid axis' stride in elements.
    """

    strategy: str
    dim_order: tuple[int, ...]
    strides: tuple[int, ...]
    cache_block: int = 8

    def __post_init__(self) -> None:
        if self.strategy not in (TRANSPOSE, STRIDED):
            raise ValueError(f"unknown layout strategy {self.strategy!r}")
        if sorted(self.dim_order) != list(range(len(self.dim_order))):
            raise ValueError(f"dim_order {self.dim_order} is not a permutation")
        if self.cache_block < 1:
            raise ValueError(f"cache_block must be >= 1, got {self.cache_block}")

    @classmethod
    def for_grid(
        cls,
        grid: GridSpec,
        strategy: str,
        dim_order: tuple[int, ...] | None = None,
        cache_block: int = 8,
    ) -> "LayoutDescriptor":
        """Descriptor for ``grid``; the default order keeps x1 fastest and
        the velocity axes at the largest strides."""
        if dim_order is None:
            dim_order = tuple(reversed(range(grid.ndim)))
        strides = [0] * grid.ndim
        acc = 1
        for a in reversed(dim_order):
            strides[a] = acc
            acc *= grid.dof(a)
        return cls(strategy, tuple(dim_order), tuple(strides), cache_block)


class DistributionField:
    """Grid function stored as one contiguous block plus a layout."""

    def __init__(self, grid: GridSpec, layout: LayoutDescriptor, phys: np.ndarray):
        expected = tuple(grid.dof(a) for a in layout.dim_order)
        if phys.shape != expected:
            raise ValueError(f"storage shape {phys.shape} does not match layout {expected}")
        if not phys.flags.c_contiguous:
            raise ValueError("field storage must be C-contiguous")
        self.grid = grid
        self.layout = layout
        self._phys: np.ndarray = phys

    @classmethod
    def zeros(
        cls,
        grid: GridSpec,
        strategy: str | None = None,
        cache_block: int = 8,
    ) -> "DistributionField":
        layout = LayoutDescriptor.for_grid(
            grid, strategy or DEFAULT_STRATEGY[grid.method], cache_block=cache_block
        )
        phys = np.zeros(tuple(grid.dof(a) for a in layout.dim_order))
        return cls(grid, layout, phys)

    @classmethod
    def from_values(
        cls,
        grid: GridSpec,
        values: np.ndarray,
        strategy: str | None = None,
        cache_block: int = 8,
    ) -> "DistributionField":
        """Build from an array in logical (grid-axis) order."""
        field = cls.zeros(grid, strategy, cache_block)
        field.array[...] = values
        return field

    @property
    def data(self) -> np.ndarray:
        """Flat contiguous view of the storage."""
        return self._phys.reshape(-1)

    @property
    def array(self) -> np.ndarray:
        """Logical view with axes in grid order."""
        perm = tuple(self.layout.dim_order.index(i) for i in range(self.grid.ndim))
        return self._phys.transpose(perm)

    def copy(self) -> "DistributionField":
        return DistributionField(self.grid, self.layout, self._phys.copy())

    def _adopt(self, phys: np.ndarray, layout: LayoutDescriptor) -> None:
        self.layout = layout
        self._phys = phys


def _table_index_array(
    grid: GridSpec, other_axes: tuple[int, ...], table_axes: tuple[int, ...]
) -> np.ndarray:
    """Per-line index into a kernel's shift table, row-major over table_axes.

    Lines are enumerated in C order over ``other_axes``; kernels whose shift
    depends on no axis get an all-zero index.
    """
    for a in table_axes:
        if a not in other_axes:
            raise ValueError(f"table axis {a} is not transverse to the sweep")
    lead = tuple(grid.dof(a) for a in other_axes)
    idx = np.zeros(lead, dtype=np.int64)
    mult = 1
    for a in reversed(table_axes):
        pos = other_axes.index(a)
        shape = [1] * len(other_axes)
        shape[pos] = lead[pos]
        idx += (mult * np.arange(lead[pos], dtype=np.int64)).reshape(shape)
        mult *= grid.dof(a)
    return idx.reshape(-1)


def _as4d(view: np.ndarray) -> np.ndarray:
    while view.ndim < 4:
        view = view[None]
    return view


def _sweep(field: DistributionField, axis: int, kernel, consume: bool) -> DistributionField:
    grid = field.grid
    if not 0 <= axis < grid.ndim:
        raise ValueError(f"axis {axis} out of range for {grid.ndim} axes")
    n = grid.dof(axis)
    other_axes = tuple(a for a in range(grid.ndim) if a != axis)
    idx = _table_index_array(grid, other_axes, getattr(kernel, "table_axes", ()))
    fast = hasattr(kernel, "run_contig")
    block = field.layout.cache_block

    if field.layout.strategy == TRANSPOSE:
        view = np.moveaxis(field.array, axis, -1)
        lead_shape = view.shape[:-1]
        contig = np.ascontiguousarray(view)
        del view
        if consume and contig.base is not field._phys:
            field._phys = None  # type: ignore[assignment]
        lines = contig.reshape(-1, n)
        if fast:
            out = kernel.run_contig(lines, idx)
        else:
            out = _generic_lines(lines, lead_shape, kernel, n)
        del lines, contig
        layout = LayoutDescriptor.for_grid(grid, TRANSPOSE, other_axes + (axis,), block)
        phys = out.reshape(lead_shape + (n,))
        if consume:
            field._adopt(phys, layout)
            return field
        return DistributionField(grid, layout, phys)

    target = field if consume else field.copy()
    view = _as4d(np.moveaxis(target.array, axis, -1))
    if fast:
        kernel.run_strided(view, idx, block)
    else:
        _generic_strided(view, lead_shape_of(target, axis), kernel, n, block)
    return target


def lead_shape_of(field: DistributionField, axis: int) -> tuple[int, ...]:
    return tuple(field.grid.dof(a) for a in range(field.grid.ndim) if a != axis)


def _generic_lines(lines: np.ndarray, lead_shape, kernel, n: int) -> np.ndarray:
    out = np.empty_like(lines)
    for row, coords in enumerate(np.ndindex(*lead_shape)):
        res = np.asarray(kernel(lines[row].copy(), coords), dtype=float)
        if res.shape != (n,):
            raise ValueError(f"kernel returned shape {res.shape}, expected ({n},)")
        out[row] = res
    return out


def _generic_strided(view: np.ndarray, lead_shape, kernel, n: int, block: int) -> None:
    lead = view.shape[:-1]
    total = int(np.prod(lead))
    for r0 in range(0, total, block):
        rows = np.arange(r0, min(r0 + block, total))
        ii = np.unravel_index(rows, lead)
        gathered = np.ascontiguousarray(view[ii[0], ii[1], ii[2], :])
        out = np.empty_like(gathered)
        for k, row in enumerate(rows):
            coords = np.unravel_index(row, lead_shape)
            res = np.asarray(kernel(gathered[k].copy(), tuple(int(c) for c in coords)), dtype=float)
            if res.shape != (n,):
                raise ValueError(f"kernel returned shape {res.shape}, expected ({n},)")
            out[k] = res
        view[ii[0], ii[1], ii[2], :] = out


def line_sweep(field: DistributionField, axis: int, kernel) -> DistributionField:
    """Apply a 1D kernel to every line along ``axis``; input is untouched.

    ``kernel`` is either a callable ``(line, transverse_indices) -> line`` or
    a fast sweep kernel exposing ``run_contig``/``run_strided`` (see
    :class:`slvp.spline.SplineAdvection` and :class:`slvp.dg.DGAdvection`).
    """
    return _sweep(field, axis, kernel, consume=False)


# --- VLF1 snapshot format ---------------------------------------------------
#
# magic "VLF1", little-endian u32 axis count, then per axis f64 lower,
# f64 upper, u32 count, u8 kind (0 space, 1 velocity), then u8 method
# (0 spline, 1 dg), u8 dg degree, then the f64 payload in canonical order
# (x1 fastest, last velocity axis slowest; dG nodes innermost within a cell).

_MAGIC = b"VLF1"
_KIND_CODE = {SPACE: 0, VELOCITY: 1}
_KIND_NAME = {0: SPACE, 1: VELOCITY}
_METHOD_CODE = {SPLINE: 0, DG: 1}
_METHOD_NAME = {0: SPLINE, 1: DG}


def write_snapshot(field: DistributionField, path) -> None:
    grid = field.grid
    blob = bytearray(_MAGIC)
    blob += struct.pack("<I", grid.ndim)
    for ax in grid.axes:
        blob += struct.pack("<ddIB", ax.lower, ax.upper, ax.count, _KIND_CODE[ax.kind])
    blob += struct.pack("<BB", _METHOD_CODE[grid.method], grid.dg_degree)
    canonical = np.ascontiguousarray(field.array.transpose(tuple(reversed(range(grid.ndim)))))
    blob += canonical.astype("<f8", copy=False).tobytes()
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(blob)


def read_snapshot(path) -> DistributionField:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _MAGIC:
        raise ValueError(f"{path}: not a VLF1 snapshot")
    pos = 4
    (ndim,) = struct.unpack_from("<I", blob, pos)
    pos += 4
    axes = []
    for _ in range(ndim):
        lower, upper, count, kind = struct.unpack_from("<ddIB", blob, pos)
        pos += struct.calcsize("<ddIB")
        axes.append(Axis(lower, upper, count, _KIND_NAME[kind]))
    mcode, degree = struct.unpack_from("<BB", blob, pos)
    pos += 2
    grid = GridSpec(tuple(axes), _METHOD_NAME[mcode], degree if mcode == 1 else 0)
    payload = np.frombuffer(blob, dtype="<f8", offset=pos)
    if payload.size != grid.total_dof:
        raise ValueError(f"{path}: payload has {payload.size} values, expected {grid.total_dof}")
    layout = LayoutDescriptor.for_grid(grid, DEFAULT_STRATEGY[grid.method])
    phys = payload.reshape(tuple(grid.dof(a) for a in layout.dim_order)).astype(float)
    return DistributionField(grid, layout, phys)
