import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotangent_kahler import structures as S
from cotangent_kahler.base_manifold import SpaceForm
from cotangent_kahler.bundle import TangentVector, frame_matrix, point_with_energy
from cotangent_kahler.errors import Inadmissible
from cotangent_kahler.families import ConstantFamily, ExampleFamily

from conftest import sample_points

pos = st.floats(0.2, 4.0)
tvals = st.floats(0.01, 50.0)


def test_coefficients_at_unit_energy():
    # lambda = sqrt2/2, lambda' = -sqrt2/8 at t = 1; b1 = (1 - 3/8) / (sqrt2/4)
    k = S.coefficients_at(ExampleFamily(A=1.0, B=1.0, c=1.0), 1.0, 1.0)
    assert k.a1 == pytest.approx(np.sqrt(2) / 2, rel=1e-15)
    assert k.b1 == pytest.approx(5 * np.sqrt(2) / 4, rel=1e-14)
    assert k.c1 == pytest.approx(0.5, rel=1e-15)
    assert k.c2 == pytest.approx(1.0, rel=1e-15)
    assert k.mu == pytest.approx(-np.sqrt(2) / 8, rel=1e-15)


@given(pos, pos, pos, tvals)
def test_coefficient_relations(A, B, c, t):
    L = ExampleFamily(A=A, B=B, c=c)
    k = S.coefficients_at(L, c, t)
    lam, mu = L(t)[0], k.mu
    assert k.a1 * k.a2 == pytest.approx(1.0, abs=1e-14)
    assert (k.a1 + 2 * t * k.b1) * (k.a2 + 2 * t * k.b2) == pytest.approx(1.0, abs=1e-12)
    assert k.c1 == pytest.approx(lam * k.a1, rel=1e-11)
    assert k.c2 == pytest.approx(lam * k.a2, rel=1e-11)
    assert k.c1 + 2 * t * k.d1 == pytest.approx((lam + 2 * t * mu) * (k.a1 + 2 * t * k.b1), rel=1e-11)
    assert k.c2 + 2 * t * k.d2 == pytest.approx((lam + 2 * t * mu) * (k.a2 + 2 * t * k.b2), rel=1e-11)


@given(pos, pos, pos, tvals)
def test_example_family_gap_closed_form(A, B, c, t):
    L = ExampleFamily(A=A, B=B, c=c)
    lam = L(t)[0]
    k = S.coefficients_at(L, c, t)
    u = A * np.sqrt(t) + B
    assert 2 * c - A**2 * t * lam**2 == pytest.approx(2 * c * B * (2 * A * np.sqrt(t) + B) / u**2, rel=1e-10)
    assert A * lam + 2 * k.b1 > 0


def test_coefficient_derivatives_match_fd():
    L = ExampleFamily(A=1.3, B=0.7, c=1.1)
    for t in (0.2, 1.0, 3.5):
        h = 1e-5 * t

        def vals(s):
            k = S.coefficients_at(L, 1.1, s)
            return np.array([k.c1, k.d1, k.c2, k.d2])

        fd = (vals(t + h) - vals(t - h)) / (2 * h)
        np.testing.assert_allclose(S.coefficient_derivatives(L, 1.1, t), fd, rtol=1e-6)


def test_inadmissible_beyond_gap():
    with pytest.raises(Inadmissible):
        S.coefficients_at(ConstantFamily(A=1.0, lam0=1.0), 1.0, 2.5)


# ---------------------------------------------------------------- J


def test_J_squares_to_minus_identity(M3, L1, rng):
    worst = 0.0
    for pt in sample_points(M3, 200):
        for _ in range(5):
            X = TangentVector(rng.standard_normal(3), rng.standard_normal(3))
            JJX = S.apply_J(M3, L1, pt, S.apply_J(M3, L1, pt, X))
            worst = max(worst, np.max(np.abs(JJX.components + X.components)))
    assert worst < 1e-10


def test_J_swaps_horizontal_and_vertical(M3, L1, points3):
    pt = points3[0]
    JX = S.apply_J(M3, L1, pt, TangentVector([1.0, 0.0, 0.0], np.zeros(3)))
    assert not np.any(JX.h)
    JY = S.apply_J(M3, L1, pt, TangentVector(np.zeros(3), [0.0, 1.0, 0.0]))
    assert not np.any(JY.v)
    assert not np.any(S.apply_J(M3, L1, pt, TangentVector(np.zeros(3), np.zeros(3))).components)


def test_J_blocks_are_mutually_inverse(M3, L1, points3):
    for pt in points3:
        J1, J2 = S.complex_structure_at(M3, L1, pt)
        assert np.max(np.abs(J2.data @ J1.data - np.eye(3))) < 1e-11


def test_apply_J_matches_matrix(M3, L1, points3, rng):
    for pt in points3:
        X = TangentVector(rng.standard_normal(3), rng.standard_normal(3))
        np.testing.assert_allclose(
            S.apply_J(M3, L1, pt, X).components, S.complex_structure_matrix(M3, L1, pt) @ X.components, atol=1e-14
        )


def test_perturbed_b1_still_almost_complex(M3, L1, points3):
    for pt in points3:
        b1 = S.local_data(M3, L1, pt).coeffs.b1 + 0.1
        J = S.complex_structure_matrix(M3, L1, pt, b1)
        assert np.max(np.abs(J @ J + np.eye(6))) < 1e-10


# ---------------------------------------------------------------- Nijenhuis


def test_nijenhuis_vanishes_for_integrable_b1(M3, L1):
    for pt in sample_points(M3, 50):
        N = S.nijenhuis_frame(M3, L1, pt)
        assert np.max(np.abs(N)) < 1e-10


def test_nijenhuis_detects_perturbation(M3, L1):
    pts = sample_points(M3, 50)
    hits = [np.max(np.abs(S.nijenhuis_frame(M3, L1, pt, S.local_data(M3, L1, pt).coeffs.b1 + 0.1))) > 1e-3 for pt in pts]
    assert np.mean(hits) >= 0.95


def test_nijenhuis_closed_form_matches_brackets(M3, L1, points3):
    for pt in points3:
        b1 = S.local_data(M3, L1, pt).coeffs.b1 + 0.1
        closed = S.nijenhuis_frame(M3, L1, pt, b1)
        fd = S.nijenhuis_fd(M3, L1, pt, b1)
        assert np.max(np.abs(closed - fd)) / np.max(np.abs(closed)) < 1e-5


def test_nijenhuis_fd_vanishes(M3, L1, points3):
    for pt in points3:
        assert np.max(np.abs(S.nijenhuis_fd(M3, L1, pt))) < 1e-5


def test_brace_weight_equals_curvature_constant(M3, L1, points3):
    for pt in points3:
        d = S.local_data(M3, L1, pt)
        A, t, lam, dlam = d.A, d.t, d.lam, d.dlam
        k = d.coeffs
        alpha = (k.a1 + 2 * t * k.b1) * A * (lam + t * dlam) - k.a1 * k.b1  # a1' = A (lam + t lam')
        assert alpha == pytest.approx(M3.c, rel=1e-12)


# ---------------------------------------------------------------- G and H


def test_G_positive_definite_at_many_points(M3, L1):
    for pt in sample_points(M3, 300, seed=11, t_min=0.01, t_max=20.0):
        G1, G2 = S.metric_G_at(M3, L1, pt)
        assert np.linalg.eigvalsh(G1.data)[0] > 0
        assert np.linalg.eigvalsh(G2.data)[0] > 0


def test_G_matches_coefficient_assembly(M3, L1, points3):
    for pt in points3:
        G1, G2 = S.metric_G_at(M3, L1, pt)
        A1, A2 = S.metric_G_from_coefficients(M3, L1, pt)
        np.testing.assert_allclose(G1.data, A1, rtol=1e-11, atol=1e-12 * np.max(np.abs(A1)))
        np.testing.assert_allclose(G2.data, A2, rtol=1e-11, atol=1e-12 * np.max(np.abs(A2)))


def test_full_metric_at_half_energy(M3, L1, half_energy_point):
    G = S.metric_matrix(M3, L1, half_energy_point)
    np.testing.assert_array_equal(G, G.T)
    assert np.linalg.eigvalsh(G)[0] > 0


def test_metric_refused_where_gap_closes(M3, half_energy_point):
    L = ConstantFamily(A=1.0, lam0=1.0)
    with pytest.raises(Inadmissible):
        S.metric_G_at(M3, L, point_with_energy(M3, half_energy_point.q, half_energy_point.p, 2.0))


@pytest.mark.parametrize("t", [1e-4, 0.05, 1.0, 30.0])
def test_H_inverts_G(M3, L1, half_energy_point, t):
    pt = point_with_energy(M3, half_energy_point.q, half_energy_point.p, t)
    G, H = S.metric_matrix(M3, L1, pt), S.inverse_metric_matrix(M3, L1, pt)
    assert np.max(np.abs(G @ H - np.eye(6))) < 1e-11
    assert np.max(np.abs(H - np.linalg.inv(G))) / np.max(np.abs(H)) < 1e-10


def test_hermitian(M3, L1, rng):
    for pt in sample_points(M3, 50):
        G, J = S.metric_matrix(M3, L1, pt), S.complex_structure_matrix(M3, L1, pt)
        X, Y = rng.standard_normal(6), rng.standard_normal(6)
        norm = np.sqrt(X @ G @ X) * np.sqrt(Y @ G @ Y)
        assert abs((J @ X) @ G @ (J @ Y) - X @ G @ Y) / norm < 1e-10


# ---------------------------------------------------------------- phi


def test_phi_is_G_of_J(M3, L1, points3, rng):
    for pt in points3:
        phi = S.fundamental_form_matrix(M3, L1, pt)
        G, J = S.metric_matrix(M3, L1, pt), S.complex_structure_matrix(M3, L1, pt)
        X, Y = rng.standard_normal(6), rng.standard_normal(6)
        assert X @ phi @ Y == pytest.approx(-(Y @ phi @ X), abs=1e-13)
        assert X @ phi @ Y == pytest.approx(X @ G @ J @ Y, rel=1e-10)
        assert not np.any(phi[:3, :3]) and not np.any(phi[3:, 3:])


def test_kahler_closed_for_mu_lambda_prime(M3, L1):
    for pt in sample_points(M3, 20):
        assert S.dphi_residual(M3, L1, pt) < 1e-6


def test_dphi_nonzero_when_mu_shifted(M3, L1):
    rng = np.random.default_rng(5)
    for _ in range(20):
        pt = point_with_energy(M3, 0.5 * rng.standard_normal(3), rng.standard_normal(3), 0.5)
        mu = S.local_data(M3, L1, pt).dlam + 1.0
        assert S.dphi_residual(M3, L1, pt, mu) > 1e-2


def test_dphi_has_no_purely_horizontal_part(M3, L1, points3):
    for pt in points3:
        mu = S.local_data(M3, L1, pt).dlam + 1.0
        D = S.dphi_components(M3, L1, pt, mu)
        E = frame_matrix(M3, pt)
        adapted = np.einsum("abc,aA,bB,cC->ABC", D, E, E, E)
        assert np.max(np.abs(adapted[:3, :3, :3])) < 1e-6
        assert np.max(np.abs(adapted)) > 1e-2


# ---------------------------------------------------------------- admissibility


def test_example_family_admissible_everywhere():
    report = S.admissibility_scan(ExampleFamily(A=1.0, B=1.0, c=1.0), 1.0, np.linspace(0.1, 10, 100))
    assert report.all_pass and report.cutoff is None


def test_constant_family_cutoff():
    grid = np.linspace(0.1, 10, 100)
    report = S.admissibility_scan(ConstantFamily(A=1.0, lam0=1.0), 1.0, grid)
    assert all(r.ok == (r.t < 2.0) for r in report.rows)
    assert abs(report.cutoff - 2.0) <= grid[1] - grid[0]


def test_negative_lambda_fails_everywhere():
    report = S.admissibility_scan(ConstantFamily(A=1.0, lam0=-1.0), 1.0, [0.1, 1.0, 5.0])
    assert not any(r.passed["lambda_positive"] for r in report.rows)
