"""Round sphere of constant curvature ``c`` in the stereographic chart.

The metric is conformally flat, ``g_ij = delta_ij / s(x)**2`` with
``s(x) = 1 + c |x|^2 / 4``, so Christoffel symbols follow from the gradient
of the log conformal factor and need no numerical differentiation.

Index conventions (used package-wide):

* ``gamma[k, i, j]``  = Gamma^k_{ij}
* ``riemann[l, k, i, j]`` = R^l_{kij}, with R(d_i, d_j) d_k = R^l_{kij} d_l
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensors import MTensor


@dataclass(frozen=True)
class SpaceForm:
    """Sphere model of dimension ``n`` and sectional curvature ``c > 0``."""

    n: int
    c: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        if not self.c > 0:
            raise ValueError(f"curvature must be positive, got {self.c!r}")

    @property
    def chart_radius(self) -> float:
        """Radius of the sampling ball ``|x| <= 2/sqrt(c)``."""
        return 2.0 / np.sqrt(self.c)


def _coords(M: SpaceForm, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (M.n,):
        raise ValueError(f"expected a point with {M.n} coordinates, got shape {x.shape}")
    return x


def conformal_factor(M: SpaceForm, x) -> float:
    x = _coords(M, x)
    return 1.0 + 0.25 * M.c * float(x @ x)


def metric_array(M: SpaceForm, x) -> np.ndarray:
    s = conformal_factor(M, x)
    return np.eye(M.n) / s**2


def inverse_metric_array(M: SpaceForm, x) -> np.ndarray:
    s = conformal_factor(M, x)
    return np.eye(M.n) * s**2


def christoffel_array(M: SpaceForm, x) -> np.ndarray:
    x = _coords(M, x)
    s = conformal_factor(M, x)
    dsigma = -0.5 * M.c * x / s  # gradient of log(1/s)
    eye = np.eye(M.n)
    return (
        np.einsum("ki,j->kij", eye, dsigma)
        + np.einsum("kj,i->kij", eye, dsigma)
        - np.einsum("ij,k->kij", eye, dsigma)
    )


def riemann_array(M: SpaceForm, x) -> np.ndarray:
    g = metric_array(M, x)
    eye = np.eye(M.n)
    # R^l_{kij} = c (delta^l_i g_jk - delta^l_j g_ik)
    return M.c * (np.einsum("li,jk->lkij", eye, g) - np.einsum("lj,ik->lkij", eye, g))


def metric_at(M: SpaceForm, x) -> MTensor:
    return MTensor(metric_array(M, x), "ll", symmetric=[(0, 1)])


def inverse_metric_at(M: SpaceForm, x) -> MTensor:
    return MTensor(inverse_metric_array(M, x), "uu", symmetric=[(0, 1)])


def christoffel_at(M: SpaceForm, x) -> MTensor:
    """Levi-Civita symbols ``Gamma^k_{ij}`` of the chart metric."""
    return MTensor(christoffel_array(M, x), "ull", symmetric=[(1, 2)])


def curvature_at(M: SpaceForm, x) -> MTensor:
    """Closed-form constant-curvature tensor ``R^l_{kij}``."""
    return MTensor(riemann_array(M, x), "ulll", antisymmetric=[(2, 3)])


def sample_base_point(M: SpaceForm, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the chart ball of radius ``2/sqrt(c)``."""
    direction = rng.standard_normal(M.n)
    direction /= np.linalg.norm(direction)
    radius = M.chart_radius * rng.random() ** (1.0 / M.n)
    return radius * direction
