"""Tour of the exact fiber algebra: products, involution, Hodge star, duals.

Every identity printed here is checked exactly (rational arithmetic), so a
nonzero defect would mean a broken convention, not roundoff.
"""

from fractions import Fraction

from diraclab import (
    MultiVector,
    commutator,
    dual_action,
    geometric_product,
    hodge,
    inner,
    reversion,
    vector_action,
    volume_blade,
    wedge,
)
from diraclab.multivector import all_blades

MV = MultiVector


def main():
    n = 3
    e1, e2, e3 = (MV.basis_vector(n, i) for i in (1, 2, 3))

    print("== generators ==")
    print("e1 * e1 =", e1 * e1)
    print("e1 * e2 =", e1 * e2, "   e2 * e1 =", e2 * e1)
    print("(e1 e2)^2 =", MV.blade(n, [1, 2]) * MV.blade(n, [1, 2]))

    print("\n== the vector action is the Clifford product ==")
    phi = MV.scalar(n, Fraction(1, 2)) + e2 + MV.blade(n, [1, 3])
    print("e1 . phi  (wedge minus contraction):", vector_action(e1, phi))
    print("e1 * phi  (geometric product):      ", geometric_product(e1, phi))

    print("\n== involution ==")
    a = e1 * e2
    b = e2 * e3 + MV.scalar(n, 2)
    print("gamma(e1 e2) =", reversion(a))
    print("gamma(a b) - gamma(b) gamma(a) =", reversion(a * b) - reversion(b) * reversion(a))

    print("\n== Hodge star (phi ^ *psi = <phi, psi> *1) ==")
    for mask in all_blades(2):
        blade = MV.blade(2, mask)
        print(f"  *({blade}) = {hodge(blade)}")
    print("volume action *1 . e2 =", geometric_product(volume_blade(n), e2),
          " vs *e2 =", hodge(e2))

    print("\n== skew-adjointness of the action ==")
    sigma, tau = MV.blade(n, [1, 2]), MV.blade(n, [2, 3])
    print("<e1 s, t> + <s, e1 t> =",
          inner(e1 * sigma, tau) + inner(sigma, e1 * tau))

    print("\n== commutator case table ==")
    e12 = MV.blade(n, [1, 2])
    for mask in (0b011, 0b100, 0b001):
        eI = MV.blade(n, mask)
        print(f"  [e1e2, {eI}] = {commutator(e12, eI)}")

    print("\n== dual action (duals carried by their metric-dual elements) ==")
    print("e1 . dual(e2) =", dual_action(e1, e2), "  and  -(e1 e2) =", -(e1 * e2))


if __name__ == "__main__":
    main()
