"""Quasi-linear system matrices, friction sources, and wave-speed utilities.

Four model families share one interface:

* ``swe``     classical two-variable shallow water
* ``swme``    full moment system, N+2 variables
* ``rswme``   reduced two-variable system with second-order closure constants
* ``hrswme``  reduced system with the globally hyperbolic regularisation

All assembly routines come in a batched flavour operating on arrays of
cell states of shape (n_cells, dim); the scalar versions wrap them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import build_tensors
from .closure import constants_for_order

FAMILIES = ("swe", "swme", "rswme", "hrswme")
REDUCED = ("rswme", "hrswme")


@dataclass(frozen=True)
class ModelSpec:
    """Model family plus the physical and scaling parameters.

    ``epsilon`` sets the viscosity and slip length through nu = nu0/epsilon
    and lam = lambda0/epsilon.  ``order`` is 0 for swe and the number of
    moment variables otherwise; the reduced families keep a two-variable
    state and use ``order`` only to select closure constants and the width
    of reconstructed moment output.
    """

    family: str
    order: int = 0
    g: float = 1.0
    epsilon: float = 1.0
    lambda0: float = 1.0
    nu0: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "swe":
            if self.order != 0:
                raise ValueError("swe carries no moment variables; order must be 0")
        elif self.order < 1:
            raise ValueError(f"{self.family} needs order >= 1, got {self.order}")
        for name in ("g", "epsilon", "lambda0", "nu0"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def nu(self) -> float:
        return self.nu0 / self.epsilon

    @property
    def lam(self) -> float:
        return self.lambda0 / self.epsilon

    @property
    def dim(self) -> int:
        """Number of conserved variables evolved by the solver."""
        return self.order + 2 if self.family == "swme" else 2


@lru_cache(maxsize=None)
def _float_tensors(order: int):
    t = build_tensors(order)
    a = np.array([[[float(v) for v in row] for row in plane] for plane in t.A])
    b = np.array([[[float(v) for v in row] for row in plane] for plane in t.B])
    c = np.array([[float(v) for v in row] for row in t.C])
    return a, b, c


@lru_cache(maxsize=None)
def _reduced_constants(order: int):
    """(Gamma, Phi, Omega, Lambda, K) as floats for the reduced families."""
    cc = constants_for_order(order)
    k = float(4 / cc.Phi)  # 192 at order 1, 180 at order >= 2
    return float(cc.Gamma), float(cc.Phi), float(cc.Omega), float(cc.Lambda), k


def _as_batch(spec: ModelSpec, state) -> np.ndarray:
    u = np.atleast_2d(np.asarray(state, dtype=float))
    if u.shape[1] != spec.dim:
        raise ValueError(f"state has {u.shape[1]} components, {spec.family} (order {spec.order}) expects {spec.dim}")
    if np.any(u[:, 0] <= 0):
        raise ValueError("state has non-positive water height")
    return u


def _primitives(u: np.ndarray):
    h = u[:, 0]
    um = u[:, 1] / h
    alpha = u[:, 2:] / h[:, None]
    return h, um, alpha


def system_matrix_batch(spec: ModelSpec, states) -> np.ndarray:
    """Assemble A(U) for every row of ``states``; shape (n, dim, dim)."""
    u = _as_batch(spec, states)
    n = u.shape[0]
    h, um, alpha = _primitives(u)
    g = spec.g
    out = np.zeros((n, spec.dim, spec.dim))
    out[:, 0, 1] = 1.0

    if spec.family == "swe":
        out[:, 1, 0] = g * h - um**2
        out[:, 1, 1] = 2.0 * um
        return out

    if spec.family in REDUCED:
        gamma, phi, _, _, k = _reduced_constants(spec.order)
        scale = (spec.epsilon * h / spec.lambda0) ** 2
        big_g = gamma * scale
        big_p = phi * scale
        out[:, 1, 0] = -(um**2) * (1.0 - big_g) + g * h * (1.0 - big_p)
        if spec.family == "hrswme":
            out[:, 1, 0] += 4.0 * spec.epsilon**4 * g * h**5 / (k**2 * spec.lambda0**4)
        out[:, 1, 1] = 2.0 * um * (1.0 + big_g)
        return out

    # swme: flux Jacobian minus the non-conservative part
    a_t, b_t, _ = _float_tensors(spec.order)
    weights = 2.0 * np.arange(1, spec.order + 1) + 1.0
    out[:, 1, 0] = g * h - um**2 - np.sum(alpha**2 / weights, axis=1)
    out[:, 1, 1] = 2.0 * um
    out[:, 1, 2:] = 2.0 * alpha / weights
    a_contract = np.einsum("ijk,nk->nij", a_t, alpha)
    b_contract = np.einsum("ijk,nk->nij", b_t, alpha)
    out[:, 2:, 0] = -2.0 * um[:, None] * alpha - np.einsum("nij,nj->ni", a_contract, alpha)
    out[:, 2:, 1] = 2.0 * alpha
    out[:, 2:, 2:] = 2.0 * a_contract + b_contract
    idx = np.arange(spec.order)
    out[:, 2 + idx, 2 + idx] += um[:, None]
    return out


def system_matrix(spec: ModelSpec, state) -> np.ndarray:
    return system_matrix_batch(spec, state)[0]


def _reduced_friction_factor(spec: ModelSpec, h: np.ndarray) -> np.ndarray:
    _, _, omega, lam_c, _ = _reduced_constants(spec.order)
    r = spec.epsilon * h / spec.lambda0
    return 1.0 - omega * r + lam_c * r**2


def source_batch(spec: ModelSpec, states) -> np.ndarray:
    """Friction source S(U) for every row of ``states``."""
    u = _as_batch(spec, states)
    h, um, alpha = _primitives(u)
    out = np.zeros_like(u)

    if spec.family == "swe":
        out[:, 1] = -(spec.nu0 / spec.lambda0) * um
        return out

    if spec.family in REDUCED:
        out[:, 1] = -(spec.nu0 / spec.lambda0) * um * _reduced_friction_factor(spec, h)
        return out

    _, _, c_t = _float_tensors(spec.order)
    weights = 2.0 * np.arange(1, spec.order + 1) + 1.0
    drag = (spec.nu / spec.lam) * (um + alpha.sum(axis=1))
    out[:, 1] = -drag
    out[:, 2:] = -weights * (drag[:, None] + (spec.nu / h[:, None]) * alpha @ c_t.T)
    return out


def source(spec: ModelSpec, state) -> np.ndarray:
    return source_batch(spec, state)[0]


def source_jacobian_batch(spec: ModelSpec, h) -> np.ndarray:
    """Matrices M(h) with S(U) = M(h) U in conserved variables.

    The friction source is linear in the momentum/moment block at fixed h,
    so backward Euler reduces to one dense solve per cell.  The h row and
    column are identically zero.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    if np.any(h <= 0):
        raise ValueError("source Jacobian requires h > 0")
    n = h.shape[0]
    out = np.zeros((n, spec.dim, spec.dim))

    if spec.family == "swe":
        out[:, 1, 1] = -(spec.nu0 / spec.lambda0) / h
        return out

    if spec.family in REDUCED:
        out[:, 1, 1] = -(spec.nu0 / spec.lambda0) * _reduced_friction_factor(spec, h) / h
        return out

    _, _, c_t = _float_tensors(spec.order)
    weights = 2.0 * np.arange(1, spec.order + 1) + 1.0
    slip = (spec.nu / spec.lam) / h
    out[:, 1, 1:] = -slip[:, None]
    out[:, 2:, 1:] = -weights[None, :, None] * slip[:, None, None]
    out[:, 2:, 2:] -= weights[None, :, None] * c_t[None, :, :] * (spec.nu / h**2)[:, None, None]
    return out


def source_jacobian(spec: ModelSpec, h: float) -> np.ndarray:
    return source_jacobian_batch(spec, h)[0]


def _reduced_discriminant(spec: ModelSpec, h, um):
    """gh-scaled term under the square root of the reduced eigenvalues."""
    gamma, phi, _, _, k = _reduced_constants(spec.order)
    scale = (spec.epsilon * h / spec.lambda0) ** 2
    big_g = gamma * scale
    disc = 1.0 - phi * scale + (um**2 / (spec.g * h)) * (3.0 * big_g + big_g**2)
    if spec.family == "hrswme":
        disc = disc + 4.0 * spec.epsilon**4 * h**4 / (k**2 * spec.lambda0**4)
    return big_g, disc


def rswme_eigenvalues(spec: ModelSpec, state):
    """Closed-form eigenvalue pair of the reduced system matrix.

    Returns complex numbers; imaginary parts are nonzero exactly when the
    state has left the hyperbolic region.
    """
    if spec.family not in REDUCED:
        raise ValueError(f"closed-form eigenvalues exist only for the reduced families, not {spec.family}")
    u = _as_batch(spec, state)
    h, um, _ = _primitives(u)
    big_g, disc = _reduced_discriminant(spec, h, um)
    mid = um * (1.0 + big_g)
    root = np.sqrt(spec.g * h) * np.lib.scimath.sqrt(disc)
    lo, hi = mid - root, mid + root
    if u.shape[0] == 1:
        return complex(lo[0]), complex(hi[0])
    return lo, hi


def hyperbolicity_threshold(spec: ModelSpec) -> float:
    """Largest water height with real wave speeds at zero mean velocity.

    The reduced system stays hyperbolic for 0 < h < lambda0/(eps*sqrt(Phi)),
    i.e. 4*sqrt(3)*lambda0/eps at order 1 and 3*sqrt(5)*lambda0/eps beyond;
    the regularised family is hyperbolic for every state.
    """
    if spec.family == "hrswme":
        return float("inf")
    if spec.family != "rswme":
        raise ValueError(f"no closed-form hyperbolicity threshold for {spec.family}")
    _, phi, _, _, _ = _reduced_constants(spec.order)
    return spec.lambda0 / (spec.epsilon * np.sqrt(phi))


def max_wavespeed_batch(spec: ModelSpec, states) -> np.ndarray:
    """Spectral radius of A(U) per cell, safe against complex eigenvalues.

    Reduced families use the closed form; swe its textbook bound; swme a
    dense eigensolve.  Whenever eigenvalues come out complex the real parts
    are combined with the bound |u_m| + sqrt(g h + sum alpha_j^2).
    """
    u = _as_batch(spec, states)
    h, um, alpha = _primitives(u)

    if spec.family == "swe":
        return np.abs(um) + np.sqrt(spec.g * h)

    if spec.family in REDUCED:
        big_g, disc = _reduced_discriminant(spec, h, um)
        mid = um * (1.0 + big_g)
        root = np.sqrt(spec.g * h * np.maximum(disc, 0.0))
        speeds = np.maximum(np.abs(mid - root), np.abs(mid + root))
        bad = disc < 0.0
        if np.any(bad):
            bound = np.abs(um) + np.sqrt(spec.g * h)
            speeds = np.where(bad, np.maximum(np.abs(mid), bound), speeds)
        return speeds

    eigs = np.linalg.eigvals(system_matrix_batch(spec, u))
    speeds = np.abs(eigs.real).max(axis=1)
    bad = np.any(eigs.imag != 0.0, axis=1)
    if np.any(bad):
        bound = np.abs(um) + np.sqrt(spec.g * h + np.sum(alpha**2, axis=1))
        speeds = np.where(bad, np.maximum(speeds, bound), speeds)
    return speeds


def max_wavespeed(spec: ModelSpec, state) -> float:
    return float(max_wavespeed_batch(spec, state)[0])


def default_source_mode(spec: ModelSpec) -> str:
    """Implicit integration for the stiff moment system, explicit otherwise."""
    return "implicit" if spec.family == "swme" else "explicit"
