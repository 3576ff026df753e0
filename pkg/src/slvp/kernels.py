"""Backend dispatch for the hot line-advection kernels.

The compiled Cython extension is preferred when importable; the pure NumPy
module is the fallback.  ``SLVP_BACKEND=python`` or ``=compiled`` forces a
choice at import time, and :func:`set_backend` switches at runtime (used by
the backend-comparison benchmark).  Both backends satisfy the same contract;
they are not required to agree bitwise with each other, only each with
itself across layout strategies and worker counts.
"""

from __future__ import annotations

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]

    _BACKENDS["compiled"] = _compiled
except ImportError:
    _compiled = None

_forced = os.environ.get("SLVP_BACKEND", "").strip().lower()
if _forced and _forced not in ("python", "compiled"):
    raise RuntimeError(f"SLVP_BACKEND must be 'python' or 'compiled', got {_forced!r}")
if _forced == "compiled" and "compiled" not in _BACKENDS:
    raise RuntimeError("SLVP_BACKEND=compiled but the extension is not built")

_active_name = _forced or ("compiled" if "compiled" in _BACKENDS else "python")


def backend_name() -> str:
    return _active_name


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    """Switch the live kernel backend ('python' or 'compiled')."""
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; built: {sorted(_BACKENDS)}")
    _active_name = name


# Spline coefficient solves are not on the hot path (sweeps embed their own);
# the NumPy implementation is the single authority for them.
cyclic_solve_lines = _kernels_py.cyclic_solve_lines


def spline_sweep_contig(lines, idx, table, h, threads):
    return _BACKENDS[_active_name].spline_sweep_contig(lines, idx, table, h, threads)


def spline_sweep_strided(view, idx, table, h, block, threads):
    return _BACKENDS[_active_name].spline_sweep_strided(view, idx, table, h, block, threads)


def dg_sweep_contig(lines, idx, a, b, q, alpha, ncells, nloc, threads):
    return _BACKENDS[_active_name].dg_sweep_contig(
        lines, idx, a, b, q, alpha, ncells, nloc, threads
    )


def dg_sweep_strided(view, idx, a, b, q, alpha, ncells, nloc, block, threads):
    return _BACKENDS[_active_name].dg_sweep_strided(
        view, idx, a, b, q, alpha, ncells, nloc, block, threads
    )
