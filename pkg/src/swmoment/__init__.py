"""Shallow-water moment models with exact closures and a finite-volume solver."""

from .basis import MomentTensors, ScaledLegendreBasis, build_basis, build_tensors, eval_phi
from .closure import ClosureConstants, compute_constants, constants_for_order, reconstruct_moments, unit_solve_check
from .models import (
    ModelSpec,
    hyperbolicity_threshold,
    max_wavespeed,
    rswme_eigenvalues,
    source,
    source_jacobian,
    system_matrix,
)
from .scenarios import (
    ScenarioConfig,
    dx_h4,
    init_scenario,
    project_velocity,
    relative_l1,
    scenario_by_name,
    velocity_profile,
)
from .solver import Grid1D, SimulationResult, SolverConfig, SolverError, run

__all__ = [
    "ClosureConstants",
    "Grid1D",
    "ModelSpec",
    "MomentTensors",
    "ScaledLegendreBasis",
    "ScenarioConfig",
    "SimulationResult",
    "SolverConfig",
    "SolverError",
    "build_basis",
    "build_tensors",
    "compute_constants",
    "constants_for_order",
    "dx_h4",
    "eval_phi",
    "hyperbolicity_threshold",
    "init_scenario",
    "max_wavespeed",
    "project_velocity",
    "reconstruct_moments",
    "relative_l1",
    "rswme_eigenvalues",
    "run",
    "scenario_by_name",
    "source",
    "source_jacobian",
    "system_matrix",
    "unit_solve_check",
    "velocity_profile",
]

__version__ = "0.1.0"
