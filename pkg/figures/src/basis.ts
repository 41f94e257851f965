/**
 * Scaled Legendre polynomials on [0, 1], normalised to 1 at zeta = 0.
 * Coefficients are integers: c_k = (-1)^k * C(j,k) * C(j+k,j).
 */

function binomial(n: number, k: number): number {
  let out = 1;
  for (let i = 1; i <= k; i++) {
    out = (out * (n - k + i)) / i;
  }
  return Math.round(out);
}

export function basisCoefficients(degree: number): number[] {
  if (!Number.isInteger(degree) || degree < 1) {
    throw new Error(`basis degree must be a positive integer, got ${degree}`);
  }
  const coeffs: number[] = [];
  for (let k = 0; k <= degree; k++) {
    coeffs.push((k % 2 === 0 ? 1 : -1) * binomial(degree, k) * binomial(degree + k, degree));
  }
  return coeffs;
}

export function evalBasis(degree: number, zeta: number): number {
  const coeffs = basisCoefficients(degree);
  let acc = 0;
  for (let k = coeffs.length - 1; k >= 0; k--) {
    acc = acc * zeta + coeffs[k];
  }
  return acc;
}

/** u(zeta) = u_m + sum_j alpha_j phi_j(zeta). */
export function velocityProfile(um: number, alphas: number[], zetas: number[]): number[] {
  return zetas.map((z) => {
    let u = um;
    alphas.forEach((a, idx) => {
      u += a * evalBasis(idx + 1, z);
    });
    return u;
  });
}
