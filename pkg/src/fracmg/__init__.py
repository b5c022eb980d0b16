"""Mixed-dimensional multigrid solver for Darcy flow in fractured porous media.

The package discretizes incompressible single-phase Darcy flow on a 2D
rectangle cut by axis-aligned, possibly intersecting fractures with a
lowest-order Raviart-Thomas mixed method under trapezoidal/midpoint
quadrature, and solves the resulting symmetric saddle-point system with a
monolithic geometric multigrid method: re-discretized coarse operators,
staggered transfer operators and a three-stage overlapping block smoother
sweeping bulk cells, fracture elements and fracture intersections.

Typical use::

    from fracmg import preset, solve_problem
    cfg = preset("one_fracture_case1", kf=1e-2)
    x, report, solver = solve_problem(cfg.hierarchy(), cfg.cycle)
"""

from .errors import (ConfigError, ConfigMismatch, DimensionMismatch,
                     FracmgError, NoConvergence, OverlappingFractures,
                     SegmentOutsideDomain, SingularBlock, SingularSystem,
                     UnknownPreset, UnsupportedValence)
from .geometry import (Domain, DirichletPressure, FixedFlux, FractureNetwork,
                       FracturePiece, FractureSegment, HORIZONTAL,
                       Intersection, VERTICAL, ZERO_FLUX, partition_domain,
                       relabel, relabel_by_points)
from .model import BoundaryConditions, ModelConfig, PiecewiseConstant
from .grids import (DofLayout, GridHierarchy, GridLevel, build_coarsest_grid,
                    build_hierarchy, levels_for_target, refine)
from .assembly import MixedDimSystem, assemble
from .transfer import (prolongation, residual_restriction, restriction,
                       tau_vector, transfer_pairs)
from .smoother import FractureLineSolver, VankaSmoother
from .multigrid import (ConvergenceReport, CycleConfig, MultigridSolver,
                        solve_problem)
from .oracle import OracleReport, compare, direct_solve
from .config import ExperimentConfig, parse, parse_file, serialize, serialize_file
from .presets import BLOCKING_KF, CONDUCTING_KF, PRESET_NAMES, preset
from .output import write_outputs

__version__ = "0.1.0"

__all__ = [
    "BLOCKING_KF", "BoundaryConditions", "CONDUCTING_KF", "ConfigError",
    "ConfigMismatch", "ConvergenceReport", "CycleConfig", "DimensionMismatch",
    "DirichletPressure", "DofLayout", "Domain", "ExperimentConfig",
    "FixedFlux", "FracmgError", "FractureLineSolver", "FractureNetwork",
    "FracturePiece", "FractureSegment", "GridHierarchy", "GridLevel",
    "HORIZONTAL", "Intersection", "MixedDimSystem", "ModelConfig",
    "MultigridSolver", "NoConvergence", "OracleReport", "OverlappingFractures",
    "PRESET_NAMES", "PiecewiseConstant", "SegmentOutsideDomain",
    "SingularBlock", "SingularSystem", "UnknownPreset", "UnsupportedValence",
    "VERTICAL", "VankaSmoother", "ZERO_FLUX", "assemble",
    "build_coarsest_grid", "build_hierarchy", "compare", "direct_solve",
    "levels_for_target", "parse", "parse_file", "partition_domain", "preset",
    "prolongation", "refine", "relabel", "relabel_by_points",
    "residual_restriction", "restriction", "serialize", "serialize_file",
    "solve_problem", "tau_vector", "transfer_pairs", "write_outputs",
]
