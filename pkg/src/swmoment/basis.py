"""Scaled Legendre basis on [0, 1] and the exact moment tensors built from it.

Everything in this module is computed in exact rational arithmetic
(``fractions.Fraction``); floating point values only appear when callers
explicitly convert.  The basis polynomials have integer monomial
coefficients, which is asserted during construction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

MAX_ORDER = 12

Poly = tuple[Fraction, ...]  # monomial coefficients, ascending degree


def _check_order(n: int, max_order: int = MAX_ORDER) -> None:
    if not isinstance(n, int):
        raise TypeError(f"order must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"order must be nonnegative, got {n}")
    if n > max_order:
        raise ValueError(
            f"order {n} exceeds the supported maximum {max_order}; "
            "raise max_order explicitly if you really need it"
        )


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


def _poly_diff(a):
    return [k * c for k, c in enumerate(a)][1:] or [Fraction(0)]


def _poly_antideriv(a):
    """Antiderivative with zero constant term."""
    return [Fraction(0)] + [Fraction(c, 1) / (k + 1) for k, c in enumerate(a)]


def _poly_int01(a) -> Fraction:
    """Exact integral over [0, 1] via the monomial rule ``int z^k = 1/(k+1)``."""
    return sum((Fraction(c) / (k + 1) for k, c in enumerate(a)), Fraction(0))


@dataclass(frozen=True)
class ScaledLegendreBasis:
    """Monomial coefficients of the scaled Legendre polynomials of degree 1..N.

    The degree-j member is normalised so that it equals 1 at zeta = 0, is
    orthogonal to all other members, and integrates to zero over [0, 1].
    The degree-0 member is the constant 1 and is not stored.
    """

    order: int
    coeffs: tuple[tuple[int, ...], ...]

    def poly(self, j: int) -> Poly:
        """Coefficients of the degree-j member as exact fractions."""
        if not 1 <= j <= self.order:
            raise IndexError(f"basis index {j} out of range 1..{self.order}")
        return tuple(Fraction(c) for c in self.coeffs[j - 1])


def build_basis(order: int, max_order: int = MAX_ORDER) -> ScaledLegendreBasis:
    """Construct the scaled Legendre basis of the given order.

    The degree-j polynomial is (1/j!) d^j/dz^j (z - z^2)^j, expanded to
    integer monomial coefficients.  order = 0 yields an empty basis.
    """
    _check_order(order, max_order)
    coeffs = []
    for j in range(1, order + 1):
        w = [Fraction(1)]
        seed = [Fraction(0), Fraction(1), Fraction(-1)]  # z - z^2
        for _ in range(j):
            w = _poly_mul(w, seed)
        for _ in range(j):
            w = _poly_diff(w)
        fact = math.factorial(j)
        ints = []
        for c in w:
            c = c / fact
            if c.denominator != 1:
                raise ArithmeticError(f"non-integer basis coefficient {c} at degree {j}")
            ints.append(int(c))
        coeffs.append(tuple(ints))
    return ScaledLegendreBasis(order=order, coeffs=tuple(coeffs))


def eval_phi(basis: ScaledLegendreBasis, j: int, zeta: float) -> float:
    """Evaluate the degree-j basis polynomial at zeta by Horner's rule."""
    c = basis.coeffs[j - 1] if 1 <= j <= basis.order else basis.poly(j)
    acc = 0.0
    for coefficient in reversed(c):
        acc = acc * zeta + coefficient
    return acc


@dataclass(frozen=True)
class MomentTensors:
    """Exact coupling tensors of the moment system at a given order.

    A is symmetric in its trailing two indices, C is symmetric and
    invertible; C also admits the closed form
    2*min(i,j)*(min(i,j)+1) for even i-j and 0 otherwise (1-based),
    which construction cross-checks against the quadrature values.
    """

    order: int
    A: tuple[tuple[tuple[Fraction, ...], ...], ...]
    B: tuple[tuple[tuple[Fraction, ...], ...], ...]
    C: tuple[tuple[Fraction, ...], ...]


def c_entry_closed_form(i: int, j: int) -> Fraction:
    """Closed form for the C matrix entry, with 1-based indices."""
    if (i - j) % 2 != 0:
        return Fraction(0)
    m = min(i, j)
    return Fraction(2 * m * (m + 1))


def build_tensors(order: int, max_order: int = MAX_ORDER) -> MomentTensors:
    """Compute the A, B, C tensors by exact monomial integration.

    A_ijk = (2i+1) * int phi_i phi_j phi_k
    B_ijk = (2i+1) * int phi_i' (int_0^z phi_j) phi_k
    C_ij  =          int phi_i' phi_j'

    with all integrals over [0, 1].  C carries no (2i+1) weight: that factor
    belongs to the friction term where C is used, and only the unweighted
    matrix is symmetric and matches the closed form, which construction
    verifies entrywise.  Indices run 1..order and are stored 0-based.
    """
    if order < 1:
        raise ValueError(f"tensors need order >= 1, got {order}")
    _check_order(order, max_order)
    basis = build_basis(order, max_order)
    phi = [list(basis.poly(j)) for j in range(1, order + 1)]
    dphi = [_poly_diff(p) for p in phi]
    iphi = [_poly_antideriv(p) for p in phi]

    a = [[[Fraction(0)] * order for _ in range(order)] for _ in range(order)]
    b = [[[Fraction(0)] * order for _ in range(order)] for _ in range(order)]
    c = [[Fraction(0)] * order for _ in range(order)]
    for i in range(order):
        w = 2 * (i + 1) + 1
        for j in range(order):
            pij = _poly_mul(phi[i], phi[j])
            bij = _poly_mul(dphi[i], iphi[j])
            for k in range(order):
                a[i][j][k] = w * _poly_int01(_poly_mul(pij, phi[k]))
                b[i][j][k] = w * _poly_int01(_poly_mul(bij, phi[k]))
            c[i][j] = _poly_int01(_poly_mul(dphi[i], dphi[j]))
            expected = c_entry_closed_form(i + 1, j + 1)
            if c[i][j] != expected:
                raise ArithmeticError(
                    f"C[{i + 1}][{j + 1}] = {c[i][j]} disagrees with closed form {expected}"
                )

    freeze3 = lambda t: tuple(tuple(tuple(row) for row in plane) for plane in t)
    return MomentTensors(
        order=order,
        A=freeze3(a),
        B=freeze3(b),
        C=tuple(tuple(row) for row in c),
    )


def export_tensors_csv(tensors: MomentTensors, directory: str | Path) -> list[Path]:
    """Debug dump of the tensors as CSV files A.csv, B.csv, C.csv.

    Rank-3 files carry rows i,j,k,numerator,denominator; C.csv drops the
    k column.  Indices are 1-based to match the math.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, tensor in (("A", tensors.A), ("B", tensors.B)):
        path = directory / f"{name}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "k", "numerator", "denominator"])
            for i, plane in enumerate(tensor, start=1):
                for j, row in enumerate(plane, start=1):
                    for k, value in enumerate(row, start=1):
                        writer.writerow([i, j, k, value.numerator, value.denominator])
        written.append(path)
    path = directory / "C.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "numerator", "denominator"])
        for i, row in enumerate(tensors.C, start=1):
            for j, value in enumerate(row, start=1):
                writer.writerow([i, j, value.numerator, value.denominator])
    written.append(path)
    return written
