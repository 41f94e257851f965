"""Path-conservative finite-volume transport with split source integration.

First order in space and time: a degree-zero polynomial-viscosity (Rusanov)
interface fluctuation with linear paths and midpoint matrix evaluation,
followed by either an explicit Euler or a backward Euler source update.
Boundaries are periodic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .models import (
    ModelSpec,
    default_source_mode,
    max_wavespeed_batch,
    source_batch,
    source_jacobian_batch,
    system_matrix_batch,
)


class SolverError(RuntimeError):
    """Raised when a step produces an invalid state; carries diagnostics."""


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    x_min: float = -1.0
    x_max: float = 1.0

    def __post_init__(self):
        if self.n_cells < 4:
            raise ValueError(f"need at least 4 cells, got {self.n_cells}")
        if self.x_max <= self.x_min:
            raise ValueError("empty spatial domain")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def cell_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    cfl: float = 0.7
    source_mode: str = "explicit"
    viscosity_scheme: str = "rusanov"

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0,1], got {self.cfl}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.source_mode not in ("implicit", "explicit"):
            raise ValueError(f"unknown source mode {self.source_mode!r}")
        if self.viscosity_scheme != "rusanov":
            raise ValueError(f"unknown viscosity scheme {self.viscosity_scheme!r}")


@dataclass
class SimulationResult:
    final_time: float
    states: np.ndarray
    step_count: int
    wall_time: float
    dt_min: float
    dt_max: float
    dt_mean: float
    snapshots: list[tuple[float, np.ndarray]] = field(default_factory=list)


def _check_states(states: np.ndarray, context: str) -> None:
    bad = ~np.isfinite(states).all(axis=1) | (states[:, 0] <= 0.0)
    if np.any(bad):
        cell = int(np.argmax(bad))
        raise SolverError(
            f"{context} produced an invalid state at cell {cell}: U = {states[cell].tolist()}"
        )


def transport_step(spec: ModelSpec, grid: Grid1D, states: np.ndarray, dt: float,
                   wavespeeds: np.ndarray | None = None) -> np.ndarray:
    """One first-order path-conservative update with periodic boundaries.

    At interface k (between cells k and k+1 mod n) the left/right-going
    fluctuations are 0.5*A(mean)*dU -/+ 0.5*s*dU with s the larger of the
    two adjacent cell wave speeds; cell k then absorbs the right-going
    fluctuation of its left interface and the left-going one of its right
    interface.
    """
    if wavespeeds is None:
        wavespeeds = max_wavespeed_batch(spec, states)
    right = np.roll(states, -1, axis=0)
    du = right - states
    mid = 0.5 * (states + right)
    a_mid = system_matrix_batch(spec, mid)
    central = 0.5 * np.einsum("nij,nj->ni", a_mid, du)
    s = np.maximum(wavespeeds, np.roll(wavespeeds, -1))
    visc = 0.5 * s[:, None] * du
    d_plus = central + visc   # right-going at interface k, hits cell k+1
    d_minus = central - visc  # left-going at interface k, hits cell k
    out = states - (dt / grid.dx) * (np.roll(d_plus, 1, axis=0) + d_minus)
    _check_states(out, "transport step")
    return out


def source_step_explicit(spec: ModelSpec, states: np.ndarray, dt: float) -> np.ndarray:
    out = states + dt * source_batch(spec, states)
    _check_states(out, "explicit source step")
    return out


def source_step_implicit(spec: ModelSpec, states: np.ndarray, dt: float) -> np.ndarray:
    """Backward Euler on the momentum/moment block; h is untouched.

    The source is linear at fixed h, so the update solves
    (I - dt*M(h)) y = y^n per cell with M from the source Jacobian.
    """
    m = source_jacobian_batch(spec, states[:, 0])[:, 1:, 1:]
    sys = np.eye(spec.dim - 1) - dt * m
    out = states.copy()
    try:
        out[:, 1:] = np.linalg.solve(sys, states[:, 1:, None])[:, :, 0]
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"implicit source system is singular at dt={dt:.6g}") from exc
    _check_states(out, "implicit source step")
    return out


def run(spec: ModelSpec, grid: Grid1D, config: SolverConfig, initial: np.ndarray,
        snapshot_times: list[float] | None = None) -> SimulationResult:
    """Advance the split scheme to t_end with CFL-adaptive time steps.

    dt is the CFL fraction of dx over the largest cell wave speed, clipped
    so that snapshot times and t_end are hit exactly.
    """
    states = np.array(initial, dtype=float)
    if states.shape != (grid.n_cells, spec.dim):
        raise ValueError(f"initial data has shape {states.shape}, expected {(grid.n_cells, spec.dim)}")
    _check_states(states, "initial data")
    pending = sorted(t for t in (snapshot_times or []) if 0.0 < t <= config.t_end)
    implicit = config.source_mode == "implicit"

    snapshots: list[tuple[float, np.ndarray]] = []
    dts: list[float] = []
    t = 0.0
    steps = 0
    tic = time.perf_counter()
    while t < config.t_end:
        speeds = max_wavespeed_batch(spec, states)
        dt = config.cfl * grid.dx / float(speeds.max())
        dt = min(dt, config.t_end - t)
        if pending:
            dt = min(dt, pending[0] - t)
        if not dt > 0.0:
            raise SolverError(f"non-positive time step {dt} at t={t:.6g}")
        try:
            states = transport_step(spec, grid, states, dt, wavespeeds=speeds)
            if implicit:
                states = source_step_implicit(spec, states, dt)
            else:
                states = source_step_explicit(spec, states, dt)
        except SolverError as exc:
            raise SolverError(f"step {steps + 1} (t={t:.6g}, dt={dt:.6g}): {exc}") from exc
        t += dt
        steps += 1
        dts.append(dt)
        if pending and t >= pending[0] - 1e-14:
            snapshots.append((pending.pop(0), states.copy()))
    wall = time.perf_counter() - tic
    return SimulationResult(
        final_time=t,
        states=states,
        step_count=steps,
        wall_time=wall,
        dt_min=min(dts) if dts else 0.0,
        dt_max=max(dts) if dts else 0.0,
        dt_mean=float(np.mean(dts)) if dts else 0.0,
        snapshots=snapshots,
    )
