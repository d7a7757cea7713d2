"""Finite-difference ground truth for the closed-form geometry.

Oracles only see fields evaluated in induced coordinates; they never read
adapted-frame closed forms. Fields are plain callables ``z -> ndarray``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationFailed, GeometryError


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference settings.

    ``h`` is scaled per direction by ``scale_guard + |z|`` so the relative
    perturbation stays uniform. ``richardson`` combines steps ``h`` and
    ``h/2`` for fourth-order accuracy.
    """

    h: float = 1e-5
    scheme: str = "central"
    scale_guard: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"step must be positive, got {self.h!r}")
        if self.scheme not in ("central", "richardson"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.scale_guard > 0:
            raise ValueError("scale_guard must be positive")


def _probe(f, z):
    try:
        return np.asarray(f(z), dtype=float)
    except GeometryError as exc:
        raise EvaluationFailed(f"probe at {z} failed: {exc}") from exc


def fd_derivative(f, z, direction, cfg: FDConfig = FDConfig(), guard=None):
    """Derivative of ``f`` at ``z`` along a coordinate index or a direction vector.

    ``guard``, if given, is called on ``z +- 2h`` before differentiating and
    must not raise; it enforces a margin around the validity boundary.
    """
    z = np.asarray(z, dtype=float)
    if np.ndim(direction) == 0:
        v = np.zeros_like(z)
        v[int(direction)] = 1.0
        step = cfg.h * (cfg.scale_guard + abs(z[int(direction)]))
    else:
        v = np.asarray(direction, dtype=float)
        vmax = np.max(np.abs(v))
        if vmax == 0:
            return np.zeros_like(_probe(f, z))
        step = cfg.h * (cfg.scale_guard + float(np.max(np.abs(z)))) / vmax
    if guard is not None:
        for s in (2.0 * step, -2.0 * step):
            _probe(guard, z + s * v)

    def central(hh):
        return (_probe(f, z + hh * v) - _probe(f, z - hh * v)) / (2.0 * hh)

    if cfg.scheme == "central":
        return central(step)
    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def fd_gradient(f, z, cfg: FDConfig = FDConfig()):
    """All coordinate derivatives stacked along a new leading axis."""
    z = np.asarray(z, dtype=float)
    return np.stack([fd_derivative(f, z, a, cfg) for a in range(z.shape[0])])


def lie_bracket(U, V, z, cfg: FDConfig = FDConfig()):
    """``[U, V]^a = U^b d_b V^a - V^b d_b U^a`` for vector fields in coordinates."""
    z = np.asarray(z, dtype=float)
    return fd_derivative(V, z, U(z), cfg) - fd_derivative(U, z, V(z), cfg)


def koszul_connection(metric, z, cfg: FDConfig = FDConfig()):
    """Coordinate Christoffels ``Gamma[a, b, c] = Gamma^a_{bc}`` of a metric field."""
    G = _probe(metric, z)
    dG = fd_gradient(metric, z, cfg)  # dG[c, a, b] = d_c G_ab
    lowered = 0.5 * (np.transpose(dG, (1, 0, 2)) + np.transpose(dG, (1, 2, 0)) - dG)
    # lowered[d, b, c] = (d_b G_dc + d_c G_db - d_d G_bc) / 2
    gamma = np.einsum("ad,dbc->abc", np.linalg.inv(G), lowered)
    return 0.5 * (gamma + np.swapaxes(gamma, 1, 2))


def metric_compatibility_residual(metric, connection, z, cfg: FDConfig = FDConfig()):
    """``max |d_c G_ab - Gamma^d_ca G_db - Gamma^d_cb G_ad|``."""
    G = _probe(metric, z)
    dG = fd_gradient(metric, z, cfg)
    gam = np.asarray(connection(z) if callable(connection) else connection)
    nabla = dG - np.einsum("dca,db->cab", gam, G) - np.einsum("dcb,ad->cab", gam, G)
    return float(np.max(np.abs(nabla)))


def curvature_from_connection(connection, z, cfg: FDConfig = FDConfig()):
    """``R[a, b, c, d] = R^a_{bcd}``, with R(d_c, d_d) d_b = R^a_{bcd} d_a.

    ``connection`` maps ``z`` to ``Gamma[a, b, c]``.
    """
    gam = _probe(connection, z)
    dgam = fd_gradient(connection, z, cfg)  # dgam[e, a, b, c] = d_e Gamma^a_bc
    R = (
        np.einsum("cadb->abcd", dgam)
        - np.einsum("dacb->abcd", dgam)
        + np.einsum("ace,edb->abcd", gam, gam)
        - np.einsum("ade,ecb->abcd", gam, gam)
    )
    return 0.5 * (R - np.swapaxes(R, 2, 3))


def fd_exterior_derivative(form, z, cfg: FDConfig = FDConfig()):
    """``(d omega)_abc = d_a omega_bc + d_b omega_ca + d_c omega_ab`` for a 2-form field."""
    dw = fd_gradient(form, z, cfg)  # dw[a, b, c] = d_a omega_bc
    out = dw + np.transpose(dw, (2, 0, 1)) + np.transpose(dw, (1, 2, 0))
    # explicit antisymmetrisation in the last pair; the cyclic sum does the rest
    return 0.5 * (out - np.swapaxes(out, 1, 2))


def nijenhuis_on_frame(structure, frame, z, cfg: FDConfig = FDConfig()):
    """``N(e_A, e_B) = [Je_A, Je_B] - J[Je_A, e_B] - J[e_A, Je_B] - [e_A, e_B]``.

    ``structure(z)`` is J in coordinates and ``frame(z)`` has the frame vectors
    as columns. Returns coordinate components ``N[nu, A, B]``.
    """
    z = np.asarray(z, dtype=float)
    E = _probe(frame, z)
    J = _probe(structure, z)
    JE = J @ E
    dE = fd_gradient(frame, z, cfg)  # dE[m, nu, A]
    dJE = fd_gradient(lambda w: _probe(structure, w) @ _probe(frame, w), z, cfg)

    def bracket(X, dX, Y, dY):
        return np.einsum("mA,mnB->nAB", X, dY) - np.einsum("mB,mnA->nAB", Y, dX)

    return (
        bracket(JE, dJE, JE, dJE)
        - np.einsum("nm,mAB->nAB", J, bracket(JE, dJE, E, dE))
        - np.einsum("nm,mAB->nAB", J, bracket(E, dE, JE, dJE))
        - bracket(E, dE, E, dE)
    )
