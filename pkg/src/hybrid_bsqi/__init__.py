"""Hybrid B-spline quasi-interpolation / WENO schemes for 1D conservation laws."""

from .evolve import HybridConfig, NumericalError, RunReport, run
from .grid import BoundaryCondition, Grid, SolutionField, build_grid
from .problems import Problem, catalog, reference_solution

__version__ = "0.1.0"

__all__ = [
    "BoundaryCondition", "Grid", "HybridConfig", "NumericalError", "Problem", "RunReport",
    "SolutionField", "build_grid", "catalog", "reference_solution", "run", "__version__",
]
