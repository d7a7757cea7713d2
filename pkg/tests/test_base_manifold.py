import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotangent_kahler.base_manifold import (
    SpaceForm,
    christoffel_array,
    christoffel_at,
    conformal_factor,
    curvature_at,
    inverse_metric_at,
    metric_array,
    metric_at,
    riemann_array,
    sample_base_point,
)
from cotangent_kahler.oracles import FDConfig, curvature_from_connection, metric_compatibility_residual

coords = st.lists(st.floats(-1.5, 1.5), min_size=3, max_size=3).map(np.array)
curvatures = st.floats(0.2, 4.0)


@pytest.mark.parametrize("n, c", [(1, 1.0), (2, 0.0), (2, -1.0), (2.5, 1.0)])
def test_space_form_rejects_bad_parameters(n, c):
    with pytest.raises(ValueError):
        SpaceForm(n, c)


def test_metric_at_origin_is_identity():
    g = metric_at(SpaceForm(2, 1.0), [0.0, 0.0])
    assert g.variance == "ll"
    np.testing.assert_array_equal(g.data, np.eye(2))


def test_metric_scaled_example():
    # (1 + 4 * 1 / 4)^-2 = 1/4
    M = SpaceForm(2, 4.0)
    np.testing.assert_allclose(metric_at(M, [1.0, 0.0]).data, np.eye(2) / 4, rtol=0, atol=1e-15)
    np.testing.assert_allclose(inverse_metric_at(M, [1.0, 0.0]).data, 4 * np.eye(2), rtol=0, atol=1e-15)


def test_wrong_point_shape():
    with pytest.raises(ValueError):
        metric_at(SpaceForm(3, 1.0), [0.0, 1.0])


@given(coords, curvatures)
def test_metric_is_conformal(x, c):
    M = SpaceForm(3, c)
    eig = np.linalg.eigvalsh(metric_array(M, x))
    np.testing.assert_allclose(eig, conformal_factor(M, x) ** -2, rtol=1e-13)


@given(coords, curvatures)
def test_inverse_metric_contracts_to_identity(x, c):
    M = SpaceForm(3, c)
    prod = metric_at(M, x).data @ inverse_metric_at(M, x).data
    assert np.max(np.abs(prod - np.eye(3))) < 1e-13


@pytest.mark.parametrize("n, c", [(2, 1.0), (3, 0.5), (4, 3.0)])
def test_christoffel_vanishes_at_origin(n, c):
    assert not np.any(christoffel_at(SpaceForm(n, c), np.zeros(n)).data)


@given(coords, curvatures)
def test_christoffel_symmetric(x, c):
    gam = christoffel_at(SpaceForm(3, c), x).data
    np.testing.assert_array_equal(gam, np.swapaxes(gam, 1, 2))


def test_christoffel_metric_compatible(rng):
    M = SpaceForm(3, 1.3)
    for _ in range(5):
        x = sample_base_point(M, rng)
        res = metric_compatibility_residual(
            lambda y: metric_array(M, y), lambda y: christoffel_array(M, y), x, FDConfig(h=1e-5)
        )
        assert res < 1e-8


def test_curvature_at_origin_values():
    R = curvature_at(SpaceForm(2, 1.0), [0.0, 0.0]).data
    assert R[0, 1, 0, 1] == pytest.approx(1.0, abs=1e-15)
    assert R[0, 1, 1, 0] == pytest.approx(-1.0, abs=1e-15)


@given(coords, curvatures)
def test_curvature_antisymmetric(x, c):
    R = curvature_at(SpaceForm(3, c), x).data
    np.testing.assert_array_equal(R, -np.swapaxes(R, 2, 3))


def test_curvature_matches_fd_of_christoffels(rng):
    M = SpaceForm(3, 1.0)
    for _ in range(5):
        x = sample_base_point(M, rng)
        fd = curvature_from_connection(lambda y: christoffel_array(M, y), x, FDConfig(h=1e-4, scheme="richardson"))
        R = riemann_array(M, x)
        assert np.max(np.abs(fd - R)) / np.max(np.abs(R)) < 1e-6


def test_sampled_points_inside_chart_ball(rng):
    M = SpaceForm(4, 2.0)
    pts = np.array([sample_base_point(M, rng) for _ in range(200)])
    assert np.all(np.linalg.norm(pts, axis=1) <= M.chart_radius)
