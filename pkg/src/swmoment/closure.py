"""Equilibrium closure constants and the moment-reconstruction formula.

The reduced two-variable models are parameterised by a handful of rational
constants obtained from small linear systems in the C matrix.  All solves
here are exact; the solver pipeline consumes float conversions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .basis import MomentTensors, build_tensors


def solve_exact(matrix, rhs):
    """Solve a square rational system by Gaussian elimination with pivoting.

    Raises ArithmeticError on a singular matrix.  Inputs are sequences of
    Fractions; the result is a list of Fractions.
    """
    n = len(rhs)
    aug = [[Fraction(matrix[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular matrix in exact solve")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


@dataclass(frozen=True)
class ClosureConstants:
    """Rational closure constants of the reduced model at a given order.

    Btilde scales the first-order moment response to u_m*h, Dtilde and
    Ftilde the second-order responses to u_m*h^2 and the gradient of h^4.
    Gamma/Phi enter the transport matrix, Omega/Lambda the friction term;
    Lambda always equals -Phi + Omega^2.
    """

    order: int
    Btilde: tuple[Fraction, ...]
    Dtilde: tuple[Fraction, ...]
    Ftilde: tuple[Fraction, ...]
    Gamma: Fraction
    Phi: Fraction
    Omega: Fraction
    Lambda: Fraction


def compute_constants(tensors: MomentTensors) -> ClosureConstants:
    """Solve the closure linear systems for the given moment tensors.

    Btilde solves C b = 1.  With Ctilde_ij = (2i+1) C_ij, Ftilde are the
    row sums of Ctilde^-1 C^-1 (computed as Ctilde^-1 Btilde), and
    Dtilde_i = -Ftilde_i + Omega * Btilde_i.  The scalars are
    Gamma = sum Btilde_j^2/(2j+1), Phi = sum Ftilde, Omega = sum Btilde,
    Lambda = sum Dtilde.
    """
    n = tensors.order
    c = tensors.C
    ones = [Fraction(1)] * n
    btilde = solve_exact(c, ones)
    ctilde = [[(2 * (i + 1) + 1) * c[i][j] for j in range(n)] for i in range(n)]
    ftilde = solve_exact(ctilde, btilde)
    omega = sum(btilde, Fraction(0))
    dtilde = [-f + omega * b for f, b in zip(ftilde, btilde)]
    gamma = sum((b * b / (2 * (j + 1) + 1) for j, b in enumerate(btilde)), Fraction(0))
    phi = sum(ftilde, Fraction(0))
    lam = sum(dtilde, Fraction(0))
    if lam != -phi + omega * omega:
        raise ArithmeticError(f"closure identity violated at order {n}: {lam} != {-phi + omega * omega}")
    return ClosureConstants(
        order=n,
        Btilde=tuple(btilde),
        Dtilde=tuple(dtilde),
        Ftilde=tuple(ftilde),
        Gamma=gamma,
        Phi=phi,
        Omega=omega,
        Lambda=lam,
    )


def constants_for_order(order: int) -> ClosureConstants:
    return compute_constants(build_tensors(order))


def unit_solve_check(order: int) -> bool:
    """Check that the exact solve of C b = 1 returns (1/4, 1/12, 0, ..., 0)."""
    if order < 2:
        raise ValueError(f"the vanishing-tail property is stated for order >= 2, got {order}")
    b = solve_exact(build_tensors(order).C, [Fraction(1)] * order)
    expected = [Fraction(1, 4), Fraction(1, 12)] + [Fraction(0)] * (order - 2)
    return b == expected


def reconstruct_moments(constants: ClosureConstants, h, u_m, dx_h4, params) -> np.ndarray:
    """Post-process reduced-model fields into moment coefficients.

    alpha_j = -(eps/lambda0) Btilde_j u_m h
              + eps^2 ( Dtilde_j u_m h^2 / lambda0^2
                        - g Ftilde_j dx_h4 / (4 nu0 lambda0) )

    h, u_m and dx_h4 may be scalars or broadcastable arrays; the result has
    one trailing axis of length ``constants.order``.
    """
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise ValueError("reconstruction requires h > 0 everywhere")
    u_m = np.asarray(u_m, dtype=float)
    dx_h4 = np.asarray(dx_h4, dtype=float)
    eps, lam0, nu0, g = params.epsilon, params.lambda0, params.nu0, params.g
    bt = np.array([float(v) for v in constants.Btilde])
    dt_ = np.array([float(v) for v in constants.Dtilde])
    ft = np.array([float(v) for v in constants.Ftilde])
    first = -(eps / lam0) * np.multiply.outer(u_m * h, bt)
    second = eps**2 * (
        np.multiply.outer(u_m * h * h, dt_) / lam0**2
        - (g / (4.0 * nu0 * lam0)) * np.multiply.outer(dx_h4, ft)
    )
    return first + second
