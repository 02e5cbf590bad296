"""Splitting, finite-difference and spectral time steppers for the 1D
Gross-Pitaevskii equation, with soliton oracles, diagnostics and a
benchmark harness."""

__version__ = "0.1.0"

from .grid import SpaceGrid, TimeMesh, build_grid, build_time_mesh
from .field import Layout, WaveField
from .steppers import ModelParams, PicardResult, Scheme, SchemeConfig, advance
from .experiments import (
    Problem, RunSpec, InstabilityError, run_simulation, convergence_tableau,
    benchmark, temporal_order_study,
)

__all__ = [
    "SpaceGrid", "TimeMesh", "build_grid", "build_time_mesh", "Layout", "WaveField",
    "ModelParams", "PicardResult", "Scheme", "SchemeConfig", "advance", "Problem",
    "RunSpec", "InstabilityError", "run_simulation", "convergence_tableau",
    "benchmark", "temporal_order_study",
]
