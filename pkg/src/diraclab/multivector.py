"""Exact arithmetic on one fiber of the Clifford bundle.

Elements live in the 2^n-dimensional algebra generated by an orthonormal
frame e_1, ..., e_n subject to

    e_i * e_i = -1,      e_i * e_j = -e_j * e_i   (i != j),

the signature forced jointly by skew-adjointness of the vector action,
the norm identity |v*s| = |v||s|, and nonnegativity of the Dirac square.
Under the standard identification with the exterior algebra the same
coefficient data also carries wedge, contraction and the Hodge star, and
the vector action decomposes as  v*s = v^s - i_v s.

Basis blades are keyed by bitmasks: bit (i-1) set means the factor e_i is
present. Coefficients may be exact (int / Fraction) or floats; operations
never change the scalar type on their own.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

MIN_DIM = 2
MAX_DIM = 12


def _check_dim(dim: int) -> None:
    if not MIN_DIM <= dim <= MAX_DIM:
        raise ValueError(f"fiber dimension must be in [{MIN_DIM}, {MAX_DIM}], got {dim}")


def _check_same_dim(a: "MultiVector", b: "MultiVector") -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")


def swap_count(mask_a: int, mask_b: int) -> int:
    """Transpositions needed to ascending-sort the concatenation (A, B)."""
    mask_a >>= 1
    total = 0
    while mask_a:
        total += (mask_a & mask_b).bit_count()
        mask_a >>= 1
    return total


def blade_geometric(mask_a: int, mask_b: int) -> tuple[int, int]:
    """Geometric product of two basis blades: (sign, result mask).

    Repeated generators contract with e_i*e_i = -1.
    """
    swaps = swap_count(mask_a, mask_b) + (mask_a & mask_b).bit_count()
    return (-1 if swaps & 1 else 1), mask_a ^ mask_b


def blade_wedge(mask_a: int, mask_b: int) -> tuple[int, int]:
    """Wedge of basis blades: (sign, mask); sign 0 when they share a factor."""
    if mask_a & mask_b:
        return 0, 0
    return (-1 if swap_count(mask_a, mask_b) & 1 else 1), mask_a | mask_b


def hodge_sign(mask: int, dim: int) -> int:
    """Sign s with  *e_I = s * e_I'  solving  e_I ^ (*e_I) = e_{1..n}."""
    complement = ((1 << dim) - 1) ^ mask
    return -1 if swap_count(mask, complement) & 1 else 1


def blade_label(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1)


class MultiVector:
    """Sparse blade-indexed element of the rank-2^n Clifford/exterior fiber.

    Immutable by convention: no method mutates an existing instance, so
    values are safe to share across threads.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs=None):
        _check_dim(dim)
        object.__setattr__(self, "dim", dim)
        data = {}
        if coeffs:
            top = (1 << dim) - 1
            for mask, c in coeffs.items():
                if not 0 <= mask <= top:
                    raise ValueError(f"blade mask {mask:#x} out of range for dim {dim}")
                if c != 0:
                    data[mask] = c
        object.__setattr__(self, "coeffs", data)

    def __setattr__(self, name, value):
        raise AttributeError("MultiVector is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "MultiVector":
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, value) -> "MultiVector":
        return cls(dim, {0: value})

    @classmethod
    def blade(cls, dim: int, indices, coeff=1) -> "MultiVector":
        """Basis blade from ascending 1-based indices, or from a raw mask."""
        if isinstance(indices, int):
            mask = indices
        else:
            idx = list(indices)
            if sorted(set(idx)) != idx:
                raise ValueError(f"blade indices must be strictly ascending, got {idx}")
            mask = 0
            for i in idx:
                if not 1 <= i <= dim:
                    raise ValueError(f"blade index {i} out of range 1..{dim}")
                mask |= 1 << (i - 1)
        return cls(dim, {mask: coeff})

    @classmethod
    def basis_vector(cls, dim: int, i: int) -> "MultiVector":
        if not 1 <= i <= dim:
            raise ValueError(f"frame index {i} out of range 1..{dim}")
        return cls(dim, {1 << (i - 1): 1})

    @classmethod
    def from_vector(cls, components) -> "MultiVector":
        """Grade-1 element from n frame components."""
        comps = list(components)
        return cls(len(comps), {1 << i: c for i, c in enumerate(comps)})

    # -- inspection -------------------------------------------------------

    def coeff(self, mask: int):
        return self.coeffs.get(mask, 0)

    def grades(self) -> set[int]:
        return {mask.bit_count() for mask in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_grade(self, p: int) -> bool:
        return all(mask.bit_count() == p for mask in self.coeffs)

    def vector_components(self) -> list:
        """Frame components of a grade-1 element."""
        if not self.is_grade(1):
            raise ValueError(f"not a grade-1 element: {self}")
        return [self.coeffs.get(1 << i, 0) for i in range(self.dim)]

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "MultiVector") -> "MultiVector":
        _check_same_dim(self, other)
        data = dict(self.coeffs)
        for mask, c in other.coeffs.items():
            data[mask] = data.get(mask, 0) + c
        return MultiVector(self.dim, data)

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.dim, {m: -c for m, c in self.coeffs.items()})

    def scale(self, factor) -> "MultiVector":
        return MultiVector(self.dim, {m: factor * c for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, MultiVector):
            return geometric_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiVector)
            and self.dim == other.dim
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for mask in sorted(self.coeffs, key=lambda m: (m.bit_count(), m)):
            c = self.coeffs[mask]
            if mask == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(blade_label(mask))
            elif c == -1:
                parts.append("-" + blade_label(mask))
            else:
                parts.append(f"{c}*{blade_label(mask)}")
        return " + ".join(parts).replace("+ -", "- ")


def all_blades(dim: int):
    """Iterate every basis blade mask of the dim-dimensional fiber."""
    return range(1 << dim)


def blades_of_grade(dim: int, p: int):
    for idx in combinations(range(dim), p):
        mask = 0
        for i in idx:
            mask |= 1 << i
        yield mask


# -- module operations ------------------------------------------------------


def geometric_product(a: MultiVector, b: MultiVector) -> MultiVector:
    """Clifford product; bilinear, associative, e_i*e_i = -1."""
    _check_same_dim(a, b)
    data = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            sign, mask = blade_geometric(ma, mb)
            term = sign * ca * cb
            data[mask] = data.get(mask, 0) + term
    return MultiVector(a.dim, data)


def reversion(a: MultiVector) -> MultiVector:
    """The involution fixing vectors and reversing products.

    On a grade-k blade it multiplies by (-1)^(k(k-1)/2); this is the unique
    anti-automorphism with gamma(X) = X on the generators.
    """
    data = {}
    for mask, c in a.coeffs.items():
        k = mask.bit_count()
        data[mask] = -c if (k * (k - 1) // 2) & 1 else c
    return MultiVector(a.dim, data)


def grade_project(a: MultiVector, p: int) -> MultiVector:
    if not 0 <= p <= a.dim:
        raise ValueError(f"grade {p} out of range 0..{a.dim}")
    return MultiVector(a.dim, {m: c for m, c in a.coeffs.items() if m.bit_count() == p})


def wedge(a: MultiVector, b: MultiVector) -> MultiVector:
    _check_same_dim(a, b)
    data = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            sign, mask = blade_wedge(ma, mb)
            if sign:
                data[mask] = data.get(mask, 0) + sign * ca * cb
    return MultiVector(a.dim, data)


def contract(v: MultiVector, a: MultiVector) -> MultiVector:
    """Metric interior product of a frame vector into a; i_{e_i} e_i = 1."""
    _check_same_dim(v, a)
    comps = v.vector_components()
    data = {}
    for mask, c in a.coeffs.items():
        for i, vi in enumerate(comps):
            if vi == 0 or not mask >> i & 1:
                continue
            below = mask & ((1 << i) - 1)
            sign = -1 if below.bit_count() & 1 else 1
            out = mask ^ (1 << i)
            data[out] = data.get(out, 0) + sign * vi * c
    return MultiVector(a.dim, data)


def vector_action(v: MultiVector, phi: MultiVector) -> MultiVector:
    """Clifford action of a frame vector through the exterior identification,
    v*phi = v^phi - i_v phi; agrees with geometric_product on grade-1 v."""
    return wedge(v, phi) - contract(v, phi)


def hodge(a: MultiVector) -> MultiVector:
    """Hodge star, the unique solution of  phi ^ *psi = <phi,psi> *1."""
    data = {}
    top = (1 << a.dim) - 1
    for mask, c in a.coeffs.items():
        data[top ^ mask] = hodge_sign(mask, a.dim) * c
    return MultiVector(a.dim, data)


def inner(a: MultiVector, b: MultiVector):
    """Fiber metric with orthonormal blade basis."""
    _check_same_dim(a, b)
    small, large = (a.coeffs, b.coeffs) if len(a.coeffs) <= len(b.coeffs) else (b.coeffs, a.coeffs)
    total = 0
    for mask, c in small.items():
        other = large.get(mask)
        if other is not None:
            total += c * other
    return total


def norm_squared(a: MultiVector):
    return inner(a, a)


def commutator(a: MultiVector, b: MultiVector) -> MultiVector:
    return geometric_product(a, b) - geometric_product(b, a)


def dual_action(a: MultiVector, sigma_dual: MultiVector) -> MultiVector:
    """Clifford action on metric duals.

    Duals are represented by their metric-dual elements, so sigma_dual is the
    element m with pairing m*(xi) = <m, xi>. The action of a on the dual is
    (a . m*)(xi) = m*(gamma(a) . xi); the returned element represents that
    functional, i.e. the metric adjoint of left multiplication by gamma(a)
    applied to m. For grade-1 a this reduces to X . s* = -(X . s)*.
    """
    _check_same_dim(a, sigma_dual)
    ga = reversion(a)
    data = {}
    for mask_b, cb in ga.coeffs.items():
        # left multiplication by blade b permutes blades: xi -> b ^ xi with a
        # sign; its adjoint reads the source coefficient with the same sign.
        for mask_xi, cm in sigma_dual.coeffs.items():
            sign, _ = blade_geometric(mask_b, mask_b ^ mask_xi)
            out = mask_b ^ mask_xi
            data[out] = data.get(out, 0) + sign * cb * cm
    return MultiVector(a.dim, data)


def volume_blade(dim: int) -> MultiVector:
    return MultiVector(dim, {(1 << dim) - 1: 1})


def rational_half():
    """Exactness-preserving 1/2: Fraction times float degrades to float."""
    return Fraction(1, 2)
