import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotangent_kahler.base_manifold import SpaceForm, christoffel_array
from cotangent_kahler.bundle import (
    BundlePoint,
    TangentVector,
    adapted_to_induced,
    bracket_structure,
    energy_density,
    frame_brackets,
    frame_matrix,
    induced_to_adapted,
    point_with_energy,
)
from cotangent_kahler.errors import ZeroSection
from cotangent_kahler.oracles import FDConfig, lie_bracket

from conftest import sample_points

vec3 = st.lists(st.floats(-2, 2), min_size=3, max_size=3).map(np.array)


def test_energy_at_origin():
    assert energy_density(SpaceForm(2, 1.0), BundlePoint([0, 0], [1, 0])) == pytest.approx(0.5)


def test_energy_scaled_metric():
    # g^ij = 4 delta^ij, so t = 0.5 * 4 * 2
    assert energy_density(SpaceForm(2, 4.0), BundlePoint([1, 0], [1, 1])) == pytest.approx(4.0)


def test_zero_covector_rejected():
    with pytest.raises(ZeroSection):
        energy_density(SpaceForm(2, 1.0), BundlePoint([0.1, 0.2], [0, 0]))


@given(vec3, vec3.filter(lambda p: np.linalg.norm(p) > 1e-3), st.floats(0.1, 10))
def test_energy_is_quadratic(q, p, s):
    M = SpaceForm(3, 1.0)
    t = energy_density(M, BundlePoint(q, p))
    assert energy_density(M, BundlePoint(q, s * p)) == pytest.approx(s * s * t, rel=1e-12)


def test_point_with_energy_hits_target():
    M = SpaceForm(3, 2.0)
    pt = point_with_energy(M, [0.1, 0.4, -0.3], [1.0, 2.0, 0.5], 1.7)
    assert energy_density(M, pt) == pytest.approx(1.7, rel=1e-14)


def test_point_coordinates_are_read_only():
    pt = BundlePoint([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        pt.q[0] = 3.0
    np.testing.assert_array_equal(BundlePoint.from_z(pt.z).z, pt.z)


def test_tangent_vector_arithmetic():
    X = TangentVector([1.0, 2.0], [3.0, 4.0])
    Y = TangentVector([0.5, 0.0], [0.0, -1.0])
    np.testing.assert_array_equal((X + 2 * Y - X).components, (Y * 2).components)
    np.testing.assert_array_equal((-X).components, -X.components)


def test_frame_is_identity_at_origin():
    M = SpaceForm(3, 1.0)
    np.testing.assert_array_equal(frame_matrix(M, BundlePoint(np.zeros(3), [1.0, 0.0, 2.0])), np.eye(6))


def test_vertical_vector_unchanged():
    M = SpaceForm(3, 1.0)
    pt = sample_points(M, 1)[0]
    X = TangentVector(np.zeros(3), [1.0, -2.0, 0.5])
    np.testing.assert_allclose(adapted_to_induced(M, pt, X), X.components, atol=0)


def test_frame_round_trip():
    M = SpaceForm(3, 1.0)
    rng = np.random.default_rng(3)
    for pt in sample_points(M, 10):
        X = TangentVector(rng.standard_normal(3), rng.standard_normal(3))
        back = induced_to_adapted(M, pt, adapted_to_induced(M, pt, X))
        np.testing.assert_allclose(back.components, X.components, atol=1e-14)


def test_vertical_brackets_vanish_and_mixed_vanish_at_origin():
    M = SpaceForm(3, 1.0)
    pt = sample_points(M, 1)[0]
    vv, vh, hh = frame_brackets(M, pt)
    assert not np.any(vv.data)
    origin = BundlePoint(np.zeros(3), [1.0, 1.0, 0.0])
    assert not np.any(frame_brackets(M, origin)[1].data)


def test_bracket_structure_matches_fd_commutators():
    M = SpaceForm(3, 1.0)
    cfg = FDConfig(h=1e-5, scheme="richardson")
    for pt in sample_points(M, 3):
        c = bracket_structure(M, pt)

        def field(A):
            return lambda z: frame_matrix(M, BundlePoint.from_z(z))[:, A]

        E = frame_matrix(M, pt)
        for A in range(6):
            for B in range(6):
                induced = lie_bracket(field(A), field(B), pt.z, cfg)
                expected = E @ c[:, A, B]
                assert np.max(np.abs(induced - expected)) < 1e-6


def test_mixed_bracket_is_christoffel():
    M = SpaceForm(3, 1.0)
    pt = sample_points(M, 1)[0]
    np.testing.assert_array_equal(frame_brackets(M, pt)[1].data, christoffel_array(M, pt.q))
