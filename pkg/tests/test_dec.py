"""Cochain complexes, Hodge spectra, Betti numbers, spectral inequalities."""

import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp

from diraclab.curvature import CurvatureTensor, r0
from diraclab.dec import (
    ConvergenceError,
    betti,
    build_dec,
    harmonic_cochains,
    inequality_checks,
    laplacian,
    multiplicity_near,
    solve_smallest,
    spectrum,
)
from diraclab.mesh import SimplicialSurface, flat_torus, icosphere

TWO_PI_SQ = 4.0 * np.pi ** 2


def test_incidence_identities():
    dec = build_dec(icosphere(3))
    assert (dec.d1 @ dec.d0).nnz == 0
    assert dec.d0.dtype.kind == "i" and dec.d1.dtype.kind == "i"


def test_star_positivity_and_area():
    dec = build_dec(icosphere(2))
    assert dec.star0.min() > 0 and dec.star1.min() > 0 and dec.star2.min() > 0
    assert dec.star0.sum() == pytest.approx(dec.mesh.total_area(), abs=1e-10)
    assert dec.meta["scheme"] == "circumcentric"
    assert dec.meta["floored_edges"] == 0


def test_torus_stars_floored_diagonals():
    m = 8
    dec = build_dec(flat_torus(m))
    assert dec.meta["scheme"] == "circumcentric"
    # the diagonal of every cell has a flat circumcentric weight of zero
    assert dec.meta["floored_edges"] == m * m
    assert dec.star1.min() > 0
    assert dec.star0.sum() == pytest.approx(1.0, abs=1e-10)
    # axis edges keep exact unit cotangent weight
    assert np.isclose(np.sort(dec.star1)[-1], 1.0, atol=1e-12)


def test_obtuse_mesh_falls_back_to_barycentric():
    # flat pillow made of one obtuse triangle and its mirror: the long edge
    # gets a negative circumcentric weight, forcing the barycentric dual
    verts = np.array([[0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [2.0, 0.3, 0.0]])
    faces = np.array([[0, 1, 2], [0, 2, 1]])
    pillow = SimplicialSurface(verts, faces, name="pillow")
    dec = build_dec(pillow)
    assert dec.meta["scheme"] == "barycentric"
    assert dec.star0.min() > 0 and dec.star1.min() > 0
    assert dec.star0.sum() == pytest.approx(pillow.total_area(), abs=1e-12)


def test_stiffness_symmetric_psd():
    dec = build_dec(icosphere(2))
    rng = np.random.default_rng(0)
    for p in (0, 1, 2):
        K, M = laplacian(dec, p)
        assert abs(K - K.T).max() == 0.0
        for _ in range(5):
            x = rng.standard_normal(K.shape[0])
            assert x @ (K @ x) > -1e-10
    with pytest.raises(ValueError):
        laplacian(dec, 3)


def test_constant_cochain_harmonic():
    dec = build_dec(icosphere(2))
    K, _ = laplacian(dec, 0)
    ones = np.ones(dec.mesh.num_vertices)
    assert np.abs(K @ ones).max() < 1e-12


def test_laplacian_commutes_with_d():
    dec = build_dec(icosphere(2))
    K0, _ = laplacian(dec, 0)
    K1, _ = laplacian(dec, 1)
    d0 = dec.d0.astype(float)
    m0inv = sp.diags(1.0 / dec.star0)
    m1inv = sp.diags(1.0 / dec.star1)
    rng = np.random.default_rng(1)
    f = rng.standard_normal(dec.mesh.num_vertices)
    lhs = m1inv @ (K1 @ (d0 @ f))
    rhs = d0 @ (m0inv @ (K0 @ f))
    assert np.abs(lhs - rhs).max() < 1e-12 * max(1.0, np.abs(rhs).max())


def test_path_graph_against_dense_oracle():
    # 1-D second-difference fixture with a closed-form-checkable spectrum
    n = 40
    main = 2.0 * np.ones(n)
    main[0] = main[-1] = 1.0
    K = sp.diags([main, -np.ones(n - 1), -np.ones(n - 1)], [0, -1, 1]).tocsr()
    M = sp.identity(n, format="csr")
    vals, vecs, residuals = solve_smallest(K, M, 6, seed=3)
    dense = np.sort(sla.eigh(K.toarray(), eigvals_only=True))[:6]
    assert np.allclose(vals, dense, atol=1e-10)
    # closed form for the free chain: 2 - 2 cos(pi k / n)
    analytic = np.sort([2.0 - 2.0 * np.cos(np.pi * k / n) for k in range(6)])
    assert np.allclose(vals, analytic, atol=1e-10)
    assert residuals.max() < 1e-10


def test_solver_bounds_and_errors():
    dec = build_dec(icosphere(1))
    K, M = laplacian(dec, 0)
    with pytest.raises(ValueError):
        solve_smallest(K, M, 0)
    with pytest.raises(ValueError):
        solve_smallest(K, M, K.shape[0])
    with pytest.raises(ConvergenceError):
        solve_smallest(K, M, 5, maxiter=1)


def test_sphere_spectrum_values(sphere_spectra):
    res0 = sphere_spectra[0]
    assert res0.eigenvalues[0] == pytest.approx(0.0, abs=1e-8)
    assert res0.eigenvalues[1] == pytest.approx(2.0, rel=0.02)
    assert res0.multiplicity_near(2.0, 0.1) == 3
    assert res0.multiplicity_near(6.0, 0.3) == 5
    assert res0.residuals.max() < 1e-8
    res1 = sphere_spectra[1]
    assert res1.multiplicity_near(2.0, 0.1) == 6


def test_sphere_betti(dec_icosphere4):
    assert [betti(dec_icosphere4, p) for p in (0, 1, 2)] == [1, 0, 1]


def test_torus_betti(dec_torus32):
    assert [betti(dec_torus32, p) for p in (0, 1, 2)] == [1, 2, 1]


def test_torus_first_eigenvalue(dec_torus48):
    res = spectrum(dec_torus48, 0, 8, seed=42)
    first = res.eigenvalues[1]
    assert abs(first - TWO_PI_SQ) / TWO_PI_SQ < 0.02
    assert res.multiplicity_near(first, 0.05 * first) == 4


def test_multiplicity_window_guard(dec_icosphere4):
    with pytest.raises(ValueError):
        multiplicity_near(dec_icosphere4, 0, target=1e-7, window=1e-6)
    assert multiplicity_near(dec_icosphere4, 0, target=2.0, window=0.1, k=8) == 3


def test_determinism(dec_torus32):
    a = spectrum(dec_torus32, 0, 6, seed=11)
    b = spectrum(dec_torus32, 0, 6, seed=11)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.residuals, b.residuals)


def test_supersymmetry_of_dirac_square():
    # nonzero 0-form spectrum pairs into the 1-form spectrum through d
    dec = build_dec(icosphere(3))
    s0 = spectrum(dec, 0, 6, seed=1).eigenvalues
    s1 = spectrum(dec, 1, 12, seed=1).eigenvalues
    for lam in s0[s0 > 1e-6]:
        assert np.min(np.abs(s1 - lam)) < 1e-7 * max(1.0, lam)


def test_sphere_eigenvalue_convergence():
    errors = []
    for k in (2, 3, 4):
        dec = build_dec(icosphere(k))
        vals = spectrum(dec, 0, 5, seed=2).eigenvalues
        errors.append(abs(vals[1] - 2.0))
    assert errors[0] > 2.0 * errors[1]
    assert errors[1] > 2.0 * errors[2]


def test_torus_harmonic_cochains_are_lattice_forms(dec_torus32):
    H = harmonic_cochains(dec_torus32, 1, k=6)
    assert H.shape[1] == 2
    m = 32
    h = 1.0 / m
    mesh = dec_torus32.mesh
    cx = np.zeros(mesh.num_edges)
    cy = np.zeros(mesh.num_edges)
    for e, (u, v) in enumerate(mesh.edges):
        iu, ju = divmod(int(u), m)
        iv, jv = divmod(int(v), m)
        cx[e] = ((iv - iu + m // 2) % m - m // 2) * h
        cy[e] = ((jv - ju + m // 2) % m - m // 2) * h
    W = dec_torus32.star1
    B = np.stack([cx, cy], axis=1)
    G = B.T @ (W[:, None] * B)
    for i in range(H.shape[1]):
        hvec = H[:, i]
        coef = np.linalg.solve(G, B.T @ (W * hvec))
        resid = hvec - B @ coef
        rel = np.sqrt(resid @ (W * resid) / (hvec @ (W * hvec)))
        assert rel < 0.05


def test_inequality_checks(sphere_spectra):
    r0_value = r0(CurvatureTensor.constant_curvature(2, 1))
    assert r0_value == pytest.approx(0.0, abs=1e-12)
    report = inequality_checks(list(sphere_spectra.values()), r0_value, curvature_min=1.0)
    assert all(rec["status"] == "pass" for rec in report.values())
    # a fabricated spectrum below the curvature floor must fail
    from diraclab.dec import SpectrumResult
    fake = SpectrumResult(0, np.array([0.0, 0.5]), np.zeros(2))
    bad = inequality_checks([fake], r0_value, curvature_min=1.0)
    assert bad["surface-eigenvalue-curvature-bound"]["status"] == "fail"
