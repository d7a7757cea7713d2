"""Points of the punctured cotangent bundle and the adapted frame.

Induced coordinates are ``z = (q^1..q^n, p_1..p_n)``. The adapted frame is
ordered ``(delta_1..delta_n, d^1..d^n)`` where ``delta_i`` is the horizontal
lift ``d/dq^i + Gamma^0_{ih} d/dp_h`` and ``d^i = d/dp_i``. Frame-indexed
arrays throughout the package use this ordering.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base_manifold import (
    SpaceForm,
    christoffel_array,
    inverse_metric_array,
    riemann_array,
    sample_base_point,
)
from .errors import ZeroSection
from .tensors import MTensor


@dataclass(frozen=True)
class BundlePoint:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(-1)
        p = np.array(self.p, dtype=float).reshape(-1)
        if q.shape != p.shape:
            raise ValueError(f"q and p must have equal length, got {q.shape} and {p.shape}")
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def z(self) -> np.ndarray:
        """Induced coordinates ``(q, p)`` as one vector of length ``2n``."""
        return np.concatenate([self.q, self.p])

    @classmethod
    def from_z(cls, z) -> "BundlePoint":
        z = np.asarray(z, dtype=float)
        half = z.shape[0] // 2
        return cls(z[:half], z[half:])


@dataclass(frozen=True)
class TangentVector:
    """Adapted-frame components: ``h`` along ``delta_i``, ``v`` along ``d/dp_i``."""

    h: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h", np.asarray(self.h, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))

    @property
    def components(self) -> np.ndarray:
        return np.concatenate([self.h, self.v])

    @classmethod
    def from_components(cls, w) -> "TangentVector":
        w = np.asarray(w, dtype=float)
        half = w.shape[0] // 2
        return cls(w[:half], w[half:])

    def __add__(self, other):
        return TangentVector(self.h + other.h, self.v + other.v)

    def __sub__(self, other):
        return TangentVector(self.h - other.h, self.v - other.v)

    def __neg__(self):
        return TangentVector(-self.h, -self.v)

    def __mul__(self, s):
        return TangentVector(s * self.h, s * self.v)

    __rmul__ = __mul__


def energy_density(M: SpaceForm, pt: BundlePoint) -> float:
    """``t = g^{ik}(q) p_i p_k / 2``."""
    if not np.any(pt.p):
        raise ZeroSection("covector is zero; point lies on the zero section")
    gi = inverse_metric_array(M, pt.q)
    return 0.5 * float(pt.p @ gi @ pt.p)


def gamma0(M: SpaceForm, pt: BundlePoint) -> np.ndarray:
    """``Gamma^0_{ih} = p_k Gamma^k_{ih}``."""
    return np.einsum("k,kih->ih", pt.p, christoffel_array(M, pt.q))


def frame_matrix(M: SpaceForm, pt: BundlePoint) -> np.ndarray:
    """Matrix whose columns are the adapted frame fields in induced coordinates."""
    n = M.n
    E = np.eye(2 * n)
    E[n:, :n] = gamma0(M, pt)
    return E


def frame_matrix_inverse(M: SpaceForm, pt: BundlePoint) -> np.ndarray:
    n = M.n
    Einv = np.eye(2 * n)
    Einv[n:, :n] = -gamma0(M, pt)
    return Einv


def adapted_to_induced(M: SpaceForm, pt: BundlePoint, X: TangentVector) -> np.ndarray:
    return frame_matrix(M, pt) @ X.components


def induced_to_adapted(M: SpaceForm, pt: BundlePoint, w) -> TangentVector:
    return TangentVector.from_components(frame_matrix_inverse(M, pt) @ np.asarray(w, dtype=float))


def frame_brackets(M: SpaceForm, pt: BundlePoint) -> tuple[MTensor, MTensor, MTensor]:
    """Brackets of the adapted frame, as coefficients along ``d/dp_k``.

    Returns ``(VV, VH, HH)`` with

    * ``VV[i, j, k]``: [d^i, d^j] = 0
    * ``VH[i, j, k]``: [d^i, delta_j] = Gamma^i_{jk} d^k
    * ``HH[i, j, k]``: [delta_i, delta_j] = R^0_{kij} d^k
    """
    n = M.n
    gam = christoffel_array(M, pt.q)
    r0 = np.einsum("h,hkij->kij", pt.p, riemann_array(M, pt.q))
    vv = np.zeros((n, n, n))
    hh = np.transpose(r0, (1, 2, 0))
    return (
        MTensor(vv, "uuu"),
        MTensor(gam, "ulu"),
        MTensor(hh, "llu", antisymmetric=[(0, 1)]),
    )


def bracket_structure(M: SpaceForm, pt: BundlePoint) -> np.ndarray:
    """Structure functions ``c[E, A, B]`` with [e_A, e_B] = c^E_{AB} e_E."""
    n = M.n
    _, vh, hh = frame_brackets(M, pt)
    c = np.zeros((2 * n, 2 * n, 2 * n))
    # [d^i, delta_j] = Gamma^i_{jk} d^k
    c[n:, n:, :n] = np.transpose(vh.data, (2, 0, 1))
    c[n:, :n, n:] = -np.transpose(vh.data, (2, 1, 0))
    c[n:, :n, :n] = np.transpose(hh.data, (2, 0, 1))
    return c


def point_with_energy(M: SpaceForm, q, direction, t: float) -> BundlePoint:
    """Rescale ``direction`` so that the resulting covector has energy ``t``."""
    direction = np.asarray(direction, dtype=float)
    gi = inverse_metric_array(M, q)
    norm2 = float(direction @ gi @ direction)
    if norm2 <= 0:
        raise ZeroSection("direction covector is zero")
    return BundlePoint(q, direction * np.sqrt(2.0 * t / norm2))


def sample_point(M: SpaceForm, rng: np.random.Generator, t_min: float, t_max: float) -> BundlePoint:
    """Random base point in the chart ball, uniform covector direction, t uniform in range."""
    q = sample_base_point(M, rng)
    direction = rng.standard_normal(M.n)
    t = rng.uniform(t_min, t_max)
    return point_with_energy(M, q, direction, t)
