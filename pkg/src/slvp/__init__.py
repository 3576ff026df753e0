"""Semi-Lagrangian Vlasov-Poisson solver on phase-space grids.

Two interchangeable advection backends (cubic-spline interpolation and
semi-Lagrangian discontinuous Galerkin) behind one sweep interface, a
spectral field solve, Strang splitting, conservation diagnostics, and a
benchmark/convergence harness.
"""

__version__ = "0.1.0"

from .bench import (
    BenchResult,
    ConvergencePoint,
    bench_step,
    compare_backends,
    convergence_study,
)
from .dg import DGAdvection, advect_line_dg, gauss_nodes, projection_pair
from .driver import (
    DiagnosticsRecord,
    ProblemSpec,
    RunConfig,
    SubstepError,
    diagnostics,
    initialize,
    make_grid,
    problem_spec,
    run,
    strang_step,
)
from .evaluate import evaluate_at, evaluate_on_grid
from .field import (
    DistributionField,
    LayoutDescriptor,
    line_sweep,
    read_snapshot,
    write_snapshot,
)
from .grid import Axis, GridSpec
from .kernels import available_backends, backend_name, set_backend
from .poisson import (
    DensityField,
    ElectricField,
    compute_density,
    electric_energy,
    solve_poisson,
)
from .spline import SplineAdvection, SplineCoefficients, advect_line_spline, build_spline

__all__ = [
    "Axis",
    "BenchResult",
    "ConvergencePoint",
    "DGAdvection",
    "DensityField",
    "DiagnosticsRecord",
    "DistributionField",
    "ElectricField",
    "GridSpec",
    "LayoutDescriptor",
    "ProblemSpec",
    "RunConfig",
    "SplineAdvection",
    "SplineCoefficients",
    "SubstepError",
    "advect_line_dg",
    "advect_line_spline",
    "available_backends",
    "backend_name",
    "bench_step",
    "compare_backends",
    "build_spline",
    "compute_density",
    "convergence_study",
    "diagnostics",
    "electric_energy",
    "evaluate_at",
    "evaluate_on_grid",
    "gauss_nodes",
    "initialize",
    "line_sweep",
    "make_grid",
    "problem_spec",
    "projection_pair",
    "read_snapshot",
    "run",
    "set_backend",
    "solve_poisson",
    "strang_step",
    "write_snapshot",
]
