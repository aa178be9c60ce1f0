"""Fiberwise curvature operators on the Clifford/exterior fiber.

The base curvature enters through components R_ijkl = <R(e_i,e_j)e_k, e_l>
in an orthonormal frame, with the sign convention

    R(X,Y) = grad_X grad_Y - grad_Y grad_X - grad_[X,Y],

so that constant sectional curvature kappa means
R(X,Y)Z = kappa(<Y,Z>X - <X,Z>Y). On the Clifford fiber the induced
curvature acts by

    R(e_i,e_j) phi = 1/2 sum_{k<l} R_ijkl [e_k e_l, phi],

and the curvature term of the Bochner identity is

    W phi = sum_{i<j} e_i e_j R(e_i,e_j) phi,

grade-preserving, pointwise self-adjoint, commuting with the Hodge star,
and equal to kappa p (n-p) on grade p at constant curvature.

All operators preserve exact (rational) coefficients; rational factors are
applied as Fractions, which degrade gracefully when mixed with floats.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .multivector import (
    MultiVector,
    all_blades,
    blades_of_grade,
    commutator,
    dual_action,
    geometric_product,
    inner,
)

_HALF = Fraction(1, 2)


class CurvatureTensor:
    """Curvature components of the base in an orthonormal frame.

    Stores R_ijkl (1-based public indices) and validates the pair
    symmetries and the first Bianchi identity on construction.
    """

    def __init__(self, dim: int, components):
        if dim < 2:
            raise ValueError("curvature tensor needs dim >= 2")
        self.dim = dim
        comp = np.asarray(components, dtype=object)
        if comp.shape != (dim, dim, dim, dim):
            raise ValueError(f"expected shape {(dim,)*4}, got {comp.shape}")
        self.components = comp
        self._validate()

    def _validate(self):
        R = self.components
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        if R[i, j, k, l] != -R[j, i, k, l]:
                            raise ValueError("antisymmetry in the first pair fails")
                        if R[i, j, k, l] != -R[i, j, l, k]:
                            raise ValueError("antisymmetry in the second pair fails")
                        if R[i, j, k, l] != R[k, l, i, j]:
                            raise ValueError("pair-exchange symmetry fails")
                        if R[i, j, k, l] + R[j, k, i, l] + R[k, i, j, l] != 0:
                            raise ValueError("first Bianchi identity fails")

    @classmethod
    def constant_curvature(cls, dim: int, kappa) -> "CurvatureTensor":
        """R(X,Y)Z = kappa(<Y,Z>X - <X,Z>Y)."""
        R = np.zeros((dim,) * 4, dtype=object)
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    R[i, j, j, i] = kappa
                    R[i, j, i, j] = -kappa
        return cls(dim, R)

    @classmethod
    def random(cls, dim: int, rng, terms: int = 2) -> "CurvatureTensor":
        """Random exact tensor as a sum of Kulkarni-Nomizu products of
        random rational symmetric matrices; this enforces every curvature
        symmetry including first Bianchi by construction."""
        R = np.zeros((dim,) * 4, dtype=object)
        R += 0  # keep object zeros as ints
        for _ in range(terms):
            h = _random_symmetric(dim, rng)
            k = _random_symmetric(dim, rng)
            for i in range(dim):
                for j in range(dim):
                    for a in range(dim):
                        for b in range(dim):
                            R[i, j, a, b] += (
                                h[i, a] * k[j, b]
                                + h[j, b] * k[i, a]
                                - h[i, b] * k[j, a]
                                - h[j, a] * k[i, b]
                            )
        return cls(dim, R)

    def component(self, i: int, j: int, k: int, l: int):
        """R_ijkl with 1-based frame indices."""
        return self.components[i - 1, j - 1, k - 1, l - 1]

    def scalar_curvature(self):
        """s = sum_ij R_ijji; equals n(n-1)kappa at constant curvature."""
        R = self.components
        n = self.dim
        return sum(R[i, j, j, i] for i in range(n) for j in range(n))

    def ricci_matrix(self) -> np.ndarray:
        """Ricci endomorphism Ric_ij = sum_k R_kijk (positive (n-1)kappa
        times identity at constant curvature kappa)."""
        n = self.dim
        R = self.components
        ric = np.zeros((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                ric[i, j] = sum(R[k, i, j, k] for k in range(n))
        return ric


def _random_symmetric(dim: int, rng) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=object)
    for i in range(dim):
        for j in range(i, dim):
            v = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            m[i, j] = v
            m[j, i] = v
    return m


class BundleCurvature:
    """Curvature of an auxiliary euclidean bundle of rank m: skew m x m
    matrices F_ij = -F_ji indexed by frame 2-planes of the base."""

    def __init__(self, dim: int, rank: int, matrices: dict):
        self.dim = dim
        self.rank = rank
        self._mats = {}
        for (i, j), mat in matrices.items():
            if not 1 <= i < j <= dim:
                raise ValueError(f"plane index ({i},{j}) must satisfy 1 <= i < j <= {dim}")
            m = np.asarray(mat, dtype=object)
            if m.shape != (rank, rank):
                raise ValueError(f"F_{i}{j} must be {rank}x{rank}")
            if not np.array_equal(m.T, -m):
                raise ValueError(f"F_{i}{j} is not skew-symmetric")
            self._mats[(i, j)] = m

    @classmethod
    def flat(cls, dim: int, rank: int) -> "BundleCurvature":
        return cls(dim, rank, {})

    @classmethod
    def random(cls, dim: int, rank: int, rng) -> "BundleCurvature":
        mats = {}
        for i in range(1, dim + 1):
            for j in range(i + 1, dim + 1):
                m = np.zeros((rank, rank), dtype=object)
                for a in range(rank):
                    for b in range(a + 1, rank):
                        v = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3)))
                        m[a, b] = v
                        m[b, a] = -v
                mats[(i, j)] = m
        return cls(dim, rank, mats)

    def matrix(self, i: int, j: int) -> np.ndarray:
        """F_ij for any i != j, using antisymmetry."""
        if i == j:
            raise ValueError("F_ii is zero by antisymmetry; no matrix stored")
        if i < j:
            m = self._mats.get((i, j))
            return m if m is not None else np.zeros((self.rank, self.rank), dtype=object)
        return -self.matrix(j, i)

    def apply(self, i: int, j: int, xi) -> np.ndarray:
        return self.matrix(i, j) @ np.asarray(xi, dtype=object)


# -- curvature action and the Bochner curvature term -------------------------


def curvature_action(rt: CurvatureTensor, i: int, j: int, phi: MultiVector) -> MultiVector:
    """Induced curvature R(e_i,e_j) acting on the fiber via
    1/2 sum_{k<l} R_ijkl [e_k e_l, phi]."""
    n = rt.dim
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"frame indices ({i},{j}) out of range 1..{n}")
    if phi.dim != n:
        raise ValueError(f"fiber dim {phi.dim} != base dim {n}")
    out = MultiVector.zero(n)
    if i == j:
        return out
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            r = rt.component(i, j, k, l)
            if r == 0:
                continue
            ekl = MultiVector.blade(n, [k, l])
            out = out + commutator(ekl, phi).scale(_HALF * r)
    return out


def weitzenboeck_apply(rt: CurvatureTensor, phi: MultiVector) -> MultiVector:
    """Curvature term of the Bochner identity:
    sum_{i<j} e_i e_j R(e_i,e_j) phi."""
    n = rt.dim
    out = MultiVector.zero(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            acted = curvature_action(rt, i, j, phi)
            if acted.is_zero():
                continue
            eij = MultiVector.blade(n, [i, j])
            out = out + geometric_product(eij, acted)
    return out


def weitzenboeck_matrix(rt: CurvatureTensor) -> np.ndarray:
    """Matrix of the curvature term in the blade basis (2^n x 2^n, exact),
    block-diagonal across grades and symmetric."""
    n = rt.dim
    size = 1 << n
    W = np.zeros((size, size), dtype=object)
    for col in all_blades(n):
        image = weitzenboeck_apply(rt, MultiVector.blade(n, col))
        for row, c in image.coeffs.items():
            W[row, col] = c
    return W


def trace_weitzenboeck(rt: CurvatureTensor, p: int):
    """Trace of the grade-p block; equals C(n-2, p-1) s for 1 <= p <= n-1."""
    n = rt.dim
    if not 0 <= p <= n:
        raise ValueError(f"grade {p} out of range 0..{n}")
    total = 0
    for mask in blades_of_grade(n, p):
        image = weitzenboeck_apply(rt, MultiVector.blade(n, mask))
        total += image.coeff(mask)
    return total


def ricci_apply(rt: CurvatureTensor, X: MultiVector, phi: MultiVector) -> MultiVector:
    """Ricci curvature operator 2 sum_i e_i R(e_i, X) phi, tensorial in X."""
    n = rt.dim
    comps = X.vector_components()
    out = MultiVector.zero(n)
    for i in range(1, n + 1):
        acted = MultiVector.zero(n)
        for m, xm in enumerate(comps, start=1):
            if xm == 0 or m == i:
                continue
            acted = acted + curvature_action(rt, i, m, phi).scale(xm)
        if not acted.is_zero():
            out = out + geometric_product(MultiVector.basis_vector(n, i), acted)
    return out.scale(2)


def kx_apply(rt: CurvatureTensor, X: MultiVector, phi: MultiVector) -> MultiVector:
    """Endomorphism pairing with the derivative of the Dirac image of a
    twistor section:  n/(n-2) [ 1/(n-1) X.(W phi) - 1/2 Ric_X phi ].

    Defined only for n >= 3 (the construction divides by n-2)."""
    n = rt.dim
    if n < 3:
        raise ValueError("the twistor derivative endomorphism needs base dimension >= 3")
    lead = geometric_product(X, weitzenboeck_apply(rt, phi)).scale(Fraction(1, n - 1))
    ric = ricci_apply(rt, X, phi).scale(_HALF)
    return (lead - ric).scale(Fraction(n, n - 2))


def r0(rt: CurvatureTensor) -> float:
    """Smallest eigenvalue of the curvature term over the unit fiber sphere
    (dense symmetric eigenproblem on the 2^n fiber)."""
    W = weitzenboeck_matrix(rt).astype(float)
    return float(np.linalg.eigvalsh(W)[0])


# -- derived-bundle formulas --------------------------------------------------


def whitney_weitzenboeck(rt: CurvatureTensor, pair):
    """Componentwise action on a Whitney sum."""
    sigma, tau = pair
    return (weitzenboeck_apply(rt, sigma), weitzenboeck_apply(rt, tau))


def dual_weitzenboeck(rt: CurvatureTensor, sigma_dual: MultiVector) -> MultiVector:
    """Curvature term on the dual bundle, computed through the dual Clifford
    action; returns the element representing the resulting functional.
    Commutes with metric dualization: equals weitzenboeck_apply on the
    representing element."""
    n = rt.dim
    out = MultiVector.zero(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            acted = curvature_action(rt, i, j, sigma_dual)
            if acted.is_zero():
                continue
            eij = MultiVector.blade(n, [i, j])
            out = out + dual_action(eij, acted)
    return out


def tensor_weitzenboeck(rt: CurvatureTensor, bc: BundleCurvature, columns):
    """Curvature term on a tensor product with an auxiliary bundle E.

    Elements of S (x) E are stored as columns: a sequence of rank-many
    MultiVectors, the a-th being the S-part paired with the a-th E-frame
    vector. Returns columns of

        W sigma (x) xi + sum_{i<j} e_i e_j sigma (x) F_ij xi.
    """
    n = rt.dim
    m = bc.rank
    if bc.dim != n:
        raise ValueError(f"base dim mismatch: curvature {n}, bundle {bc.dim}")
    cols = list(columns)
    if len(cols) != m:
        raise ValueError(f"expected {m} columns, got {len(cols)}")
    out = [weitzenboeck_apply(rt, c) for c in cols]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            F = bc.matrix(i, j)
            if not F.any():
                continue
            eij = MultiVector.blade(n, [i, j])
            acted = [geometric_product(eij, c) for c in cols]
            for b in range(m):
                for a in range(m):
                    f = F[b, a]
                    if f != 0:
                        out[b] = out[b] + acted[a].scale(f)
    return out


def theta(bc: BundleCurvature, sigma: MultiVector, xi, tau: MultiVector, zeta):
    """Curvature pairing sum_{i<j} <e_i e_j sigma, tau> <F_ij xi, zeta>,
    the trace over the orthonormal 2-plane basis; vanishes on the diagonal."""
    n = bc.dim
    xi = np.asarray(xi, dtype=object)
    zeta = np.asarray(zeta, dtype=object)
    total = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            F = bc.matrix(i, j)
            if not F.any():
                continue
            eij = MultiVector.blade(n, [i, j])
            s_part = inner(geometric_product(eij, sigma), tau)
            if s_part == 0:
                continue
            e_part = sum(zeta[b] * (F @ xi)[b] for b in range(bc.rank))
            total += s_part * e_part
    return total


def positivity_2x2(rt: CurvatureTensor, bc: BundleCurvature,
                   sigma: MultiVector, xi, tau: MultiVector, zeta):
    """Determinant of the curvature term restricted to the span of two
    simple tensors sigma(x)xi, tau(x)zeta:

        <W s,s><W t,t>|xi|^2|zeta|^2 - (<W s,t><xi,zeta> + Theta)^2.

    Nonnegative iff the restricted 2x2 operator is positive semi-definite.
    """
    xi = np.asarray(xi, dtype=object)
    zeta = np.asarray(zeta, dtype=object)
    ws = weitzenboeck_apply(rt, sigma)
    wt = weitzenboeck_apply(rt, tau)
    xi2 = sum(x * x for x in xi)
    zeta2 = sum(z * z for z in zeta)
    xz = sum(x * z for x, z in zip(xi, zeta))
    off = inner(ws, tau) * xz + theta(bc, sigma, xi, tau, zeta)
    return inner(ws, sigma) * inner(wt, tau) * xi2 * zeta2 - off * off
