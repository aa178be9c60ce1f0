"""Curvature operators on the fiber: closed forms, traces, and positivity.

Runs the main curvature-term identities at small dimensions with exact
tensors, printing the computed against the predicted values.
"""

from fractions import Fraction
from math import comb

import numpy as np

from diraclab import (
    BundleCurvature,
    CurvatureTensor,
    MultiVector,
    positivity_2x2,
    r0,
    ricci_apply,
    theta,
    trace_weitzenboeck,
    weitzenboeck_apply,
    weitzenboeck_matrix,
)
from diraclab.multivector import blades_of_grade

MV = MultiVector


def main():
    print("== constant curvature closed form ==")
    n, kappa = 4, Fraction(1)
    rt = CurvatureTensor.constant_curvature(n, kappa)
    for p in range(n + 1):
        mask = next(iter(blades_of_grade(n, p)))
        blade = MV.blade(n, mask)
        image = weitzenboeck_apply(rt, blade)
        coeff = image.coeff(mask)
        print(f"  grade {p}: W e_I = {coeff} e_I   (kappa p (n-p) = {kappa * p * (n - p)})")

    print("\n== traces against the scalar curvature ==")
    rng = np.random.default_rng(0)
    rt = CurvatureTensor.random(3, rng)
    s = rt.scalar_curvature()
    print("  scalar curvature s =", s)
    for p in (1, 2):
        print(f"  tr W_{p} = {trace_weitzenboeck(rt, p)}   C(1,{p - 1}) s = {comb(1, p - 1) * s}")
    total = sum(trace_weitzenboeck(rt, p) for p in range(4))
    print(f"  tr W = {total}   2^(n-2) s = {2 * s}")

    print("\n== Ricci operator and the spectral floor ==")
    rt2 = CurvatureTensor.constant_curvature(2, 1)
    e1 = MV.basis_vector(2, 1)
    print("  Ric_{e1} e1 =", ricci_apply(rt2, e1, e1))
    print("  r0(kappa=1, n=2) =", r0(rt2), "  (attained on the scalar/volume grades)")
    print("  r0(kappa=-1, n=2) =", r0(CurvatureTensor.constant_curvature(2, -1)))
    W = weitzenboeck_matrix(rt2).astype(float)
    print("  blade-basis matrix diagonal:", np.diag(W))

    print("\n== tensor products with an auxiliary bundle ==")
    bc = BundleCurvature.random(2, 2, np.random.default_rng(1))
    sigma = MV.basis_vector(2, 1)
    xi = [Fraction(1), Fraction(0)]
    print("  Theta(eta, eta) =", theta(bc, sigma, xi, sigma, xi))
    flat = BundleCurvature.flat(2, 2)
    tau = MV.basis_vector(2, 2)
    zeta = [Fraction(1), Fraction(2)]
    print("  flat-bundle 2x2 determinant =", positivity_2x2(rt2, flat, sigma, xi, tau, zeta),
          " (nonnegative on middle grades)")


if __name__ == "__main__":
    main()
