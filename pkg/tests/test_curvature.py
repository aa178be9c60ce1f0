"""Curvature operators on the fiber: closed forms, traces, derived bundles."""

from fractions import Fraction
from math import comb

import numpy as np
import pytest

from diraclab.curvature import (
    BundleCurvature,
    CurvatureTensor,
    curvature_action,
    dual_weitzenboeck,
    kx_apply,
    positivity_2x2,
    r0,
    ricci_apply,
    tensor_weitzenboeck,
    theta,
    trace_weitzenboeck,
    weitzenboeck_apply,
    weitzenboeck_matrix,
    whitney_weitzenboeck,
)
from diraclab.multivector import (
    MultiVector,
    all_blades,
    blades_of_grade,
    geometric_product,
    grade_project,
    hodge,
    inner,
    volume_blade,
)

MV = MultiVector


def rand_tensor(n, rng):
    return CurvatureTensor.random(n, rng)


def rand_mv(n, rng, grades=None):
    masks = (list(all_blades(n)) if grades is None
             else [m for p in grades for m in blades_of_grade(n, p)])
    return MV(n, {m: Fraction(int(rng.integers(-3, 4))) for m in masks})


def test_tensor_validation():
    bad = np.zeros((2, 2, 2, 2), dtype=object)
    bad += 0
    bad[0, 1, 0, 1] = 1  # breaks antisymmetry without the partner entries
    with pytest.raises(ValueError):
        CurvatureTensor(2, bad)
    CurvatureTensor.constant_curvature(4, Fraction(-2, 3))  # validates fine


def test_random_tensor_symmetries():
    rng = np.random.default_rng(0)
    for n in (2, 3, 4):
        R = rand_tensor(n, rng).components
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        assert R[i, j, k, l] == -R[j, i, k, l] == R[k, l, i, j]
                        assert R[i, j, k, l] + R[j, k, i, l] + R[k, i, j, l] == 0


def test_curvature_action_examples():
    rt = CurvatureTensor.constant_curvature(2, 1)
    # cross-checked against kappa(<e2,e1>e1 - <e1,e1>e2) = -e2
    assert curvature_action(rt, 1, 2, MV.basis_vector(2, 1)) == -MV.basis_vector(2, 2)
    assert curvature_action(rt, 1, 1, MV.basis_vector(2, 1)).is_zero()
    assert curvature_action(rt, 1, 2, MV.scalar(2, 5)).is_zero()
    assert curvature_action(rt, 1, 2, volume_blade(2)).is_zero()
    with pytest.raises(ValueError):
        curvature_action(rt, 0, 1, MV.basis_vector(2, 1))


def test_curvature_action_antisymmetric_linear():
    rng = np.random.default_rng(5)
    rt = rand_tensor(3, rng)
    phi = rand_mv(3, rng)
    psi = rand_mv(3, rng)
    a12 = curvature_action(rt, 1, 2, phi)
    assert a12 == -(curvature_action(rt, 2, 1, phi))
    assert curvature_action(rt, 1, 2, phi + psi) == a12 + curvature_action(rt, 1, 2, psi)


@pytest.mark.parametrize("kappa", [-1, 0, 1, 2])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_constant_curvature_closed_form(n, kappa):
    rt = CurvatureTensor.constant_curvature(n, Fraction(kappa))
    for mask in all_blades(n):
        p = mask.bit_count()
        b = MV.blade(n, mask)
        assert weitzenboeck_apply(rt, b) == b.scale(Fraction(kappa) * p * (n - p))


def test_weitzenboeck_kills_scalars_and_volume():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4):
        rt = rand_tensor(n, rng)
        assert weitzenboeck_apply(rt, MV.scalar(n, 7)).is_zero()
        assert weitzenboeck_apply(rt, volume_blade(n)).is_zero()


def test_weitzenboeck_brute_vs_closed_form_example():
    # kappa=1, n=2: e1 e2 . R(e1,e2) e1 = e1 e2 (-e2) = e1
    rt = CurvatureTensor.constant_curvature(2, 1)
    brute = geometric_product(MV.blade(2, [1, 2]), curvature_action(rt, 1, 2, MV.basis_vector(2, 1)))
    assert brute == MV.basis_vector(2, 1)
    assert weitzenboeck_apply(rt, MV.basis_vector(2, 1)) == brute


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weitzenboeck_matrix_symmetric_block_diagonal(n):
    rng = np.random.default_rng(n)
    rt = rand_tensor(n, rng)
    W = weitzenboeck_matrix(rt)
    assert np.array_equal(W, W.T)
    for col in all_blades(n):
        for row in all_blades(n):
            if row.bit_count() != col.bit_count():
                assert W[row, col] == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_hodge_commutation(n):
    rng = np.random.default_rng(20 + n)
    rt = rand_tensor(n, rng)
    for mask in all_blades(n):
        b = MV.blade(n, mask)
        assert hodge(weitzenboeck_apply(rt, b)) == weitzenboeck_apply(rt, hodge(b))


def test_trace_examples():
    # n=3, kappa=1: s = 6, grade-1 trace = C(1,0) * 6 = 6
    rt = CurvatureTensor.constant_curvature(3, 1)
    assert rt.scalar_curvature() == 6
    assert trace_weitzenboeck(rt, 1) == 6
    # n=4, kappa=1: s = 12, grade-2 trace = C(2,1) * 12 = 24 = C(4,2) * 4
    rt4 = CurvatureTensor.constant_curvature(4, 1)
    assert trace_weitzenboeck(rt4, 2) == 24 == comb(4, 2) * 1 * 2 * 2
    # n=2, kappa=1: total trace = 2^0 * s = 2
    rt2 = CurvatureTensor.constant_curvature(2, 1)
    assert sum(trace_weitzenboeck(rt2, p) for p in range(3)) == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_trace_formulas_random(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(5):
        rt = rand_tensor(n, rng)
        s = rt.scalar_curvature()
        for p in range(1, n):
            assert trace_weitzenboeck(rt, p) == comb(n - 2, p - 1) * s
        assert sum(trace_weitzenboeck(rt, p) for p in range(n + 1)) == 2 ** (n - 2) * s


@pytest.mark.parametrize("n", [2, 3, 4])
def test_grade1_block_is_ricci(n):
    rng = np.random.default_rng(200 + n)
    rt = rand_tensor(n, rng)
    ric = rt.ricci_matrix()
    for i in range(1, n + 1):
        img = weitzenboeck_apply(rt, MV.basis_vector(n, i))
        assert img == grade_project(img, 1)
        for j in range(1, n + 1):
            assert img.coeff(1 << (j - 1)) == ric[j - 1, i - 1]


def test_ricci_positive_on_round_sphere():
    for n in (2, 3, 4):
        ric = CurvatureTensor.constant_curvature(n, 1).ricci_matrix()
        for i in range(n):
            for j in range(n):
                assert ric[i, j] == ((n - 1) if i == j else 0)


def test_ricci_apply_examples():
    rt = CurvatureTensor.constant_curvature(2, 1)
    e1 = MV.basis_vector(2, 1)
    # direct frame summation: 2 e2 (kappa e2) = -2
    assert ricci_apply(rt, e1, e1) == MV.scalar(2, -2)
    assert ricci_apply(rt, e1, MV.scalar(2, 9)).is_zero()
    assert ricci_apply(rt, e1.scale(2), e1) == MV.scalar(2, -4)


def test_kx_examples():
    rt = CurvatureTensor.constant_curvature(3, 1)
    e1 = MV.basis_vector(3, 1)
    # (3/1) [ (1/2) e1 (2 e1) - (1/2)(-4) ] = 3 [-1 + 2] = 3
    assert kx_apply(rt, e1, e1) == MV.scalar(3, 3)
    flat = CurvatureTensor.constant_curvature(3, 0)
    for mask in all_blades(3):
        assert kx_apply(flat, e1, MV.blade(3, mask)).is_zero()
    phi = MV.blade(3, [1, 2])
    assert kx_apply(rt, e1, phi.scale(5)) == kx_apply(rt, e1, phi).scale(5)
    with pytest.raises(ValueError):
        kx_apply(CurvatureTensor.constant_curvature(2, 1), MV.basis_vector(2, 1),
                 MV.basis_vector(2, 1))


def test_r0_values():
    assert r0(CurvatureTensor.constant_curvature(3, 1)) == pytest.approx(0.0, abs=1e-12)
    assert r0(CurvatureTensor.constant_curvature(4, 0)) == pytest.approx(0.0, abs=1e-12)
    # kappa=-1, n=2: minimum of kappa p (n-p) over grades is -1 at p=1
    assert r0(CurvatureTensor.constant_curvature(2, -1)) == pytest.approx(-1.0, abs=1e-12)
    # matches the explicit diagonal of the blade-basis matrix
    W = weitzenboeck_matrix(CurvatureTensor.constant_curvature(2, -1)).astype(float)
    assert np.linalg.eigvalsh(W)[0] == pytest.approx(-1.0, abs=1e-12)


def test_whitney_sum():
    rng = np.random.default_rng(8)
    rt = rand_tensor(3, rng)
    s = rand_mv(3, rng)
    out = whitney_weitzenboeck(rt, (s, MV.zero(3)))
    assert out[0] == weitzenboeck_apply(rt, s)
    assert out[1].is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dual_weitzenboeck_exhaustive(n):
    rng = np.random.default_rng(300 + n)
    rt = rand_tensor(n, rng)
    for mask in all_blades(n):
        b = MV.blade(n, mask)
        assert dual_weitzenboeck(rt, b) == weitzenboeck_apply(rt, b)


def test_tensor_flat_bundle():
    rng = np.random.default_rng(9)
    rt = rand_tensor(3, rng)
    flat = BundleCurvature.flat(3, 2)
    s = rand_mv(3, rng)
    out = tensor_weitzenboeck(rt, flat, [s, MV.zero(3)])
    assert out[0] == weitzenboeck_apply(rt, s)
    assert out[1].is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_tensor_formula_against_product_rule(n, m):
    rng = np.random.default_rng(1000 + 10 * n + m)
    rt = rand_tensor(n, rng)
    bc = BundleCurvature.random(n, m, rng)
    for mask in all_blades(n):
        for a in range(m):
            cols = [MV.blade(n, mask) if b == a else MV.zero(n) for b in range(m)]
            out = tensor_weitzenboeck(rt, bc, cols)
            brute = [MV.zero(n) for _ in range(m)]
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    eij = MV.blade(n, [i, j])
                    F = bc.matrix(i, j)
                    part = [curvature_action(rt, i, j, cols[b]) for b in range(m)]
                    for b in range(m):
                        for c in range(m):
                            if F[b, c] != 0:
                                part[b] = part[b] + cols[c].scale(F[b, c])
                    for b in range(m):
                        brute[b] = brute[b] + geometric_product(eij, part[b])
            assert out == brute


def test_bundle_curvature_validation():
    with pytest.raises(ValueError):
        BundleCurvature(2, 2, {(1, 2): [[1, 0], [0, 1]]})  # not skew
    bc = BundleCurvature(2, 2, {(1, 2): [[0, 1], [-1, 0]]})
    assert np.array_equal(bc.matrix(2, 1), -bc.matrix(1, 2))
    with pytest.raises(ValueError):
        bc.matrix(1, 1)


def test_theta_diagonal_and_flat():
    rng = np.random.default_rng(12)
    for n in (2, 3):
        bc = BundleCurvature.random(n, 2, rng)
        flat = BundleCurvature.flat(n, 2)
        for _ in range(10):
            s = rand_mv(n, rng)
            t = rand_mv(n, rng)
            xi = [Fraction(int(rng.integers(-3, 4))) for _ in range(2)]
            zeta = [Fraction(int(rng.integers(-3, 4))) for _ in range(2)]
            assert theta(bc, s, xi, s, xi) == 0
            assert theta(flat, s, xi, t, zeta) == 0


def test_theta_against_tensor_pairing():
    # distinct summation route: <W_tensor(s ox xi), t ox zeta> - <W s, t><xi, zeta>
    rng = np.random.default_rng(13)
    n, m = 2, 2
    rt = rand_tensor(n, rng)
    bc = BundleCurvature.random(n, m, rng)
    for _ in range(20):
        s, t = rand_mv(n, rng), rand_mv(n, rng)
        xi = [Fraction(int(rng.integers(-3, 4))) for _ in range(m)]
        zeta = [Fraction(int(rng.integers(-3, 4))) for _ in range(m)]
        cols = [s.scale(x) for x in xi]
        wt = tensor_weitzenboeck(rt, bc, cols)
        lhs = sum(inner(wt[b], t.scale(zeta[b])) for b in range(m))
        xz = sum(x * z for x, z in zip(xi, zeta))
        assert lhs - inner(weitzenboeck_apply(rt, s), t) * xz == theta(bc, s, xi, t, zeta)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flat_positivity_middle_grades(n):
    rng = np.random.default_rng(14)
    rt = CurvatureTensor.constant_curvature(n, 1)
    flat = BundleCurvature.flat(n, 2)
    mids = list(range(1, n))
    for _ in range(100):
        s = rand_mv(n, rng, grades=mids)
        t = rand_mv(n, rng, grades=mids)
        xi = [Fraction(int(rng.integers(-3, 4))) for _ in range(2)]
        zeta = [Fraction(int(rng.integers(-3, 4))) for _ in range(2)]
        assert positivity_2x2(rt, flat, s, xi, t, zeta) >= 0
