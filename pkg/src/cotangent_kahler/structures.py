"""Complex structure J, Kähler metric G and their companions.

Everything here is pointwise algebra on closed-form component arrays. The
adapted-frame block matrices use the ordering ``(delta_1..delta_n,
d^1..d^n)``::

    J = [[0, -J2], [J1, 0]]        G = [[G1, 0], [0, G2]]
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base_manifold import SpaceForm, christoffel_array, inverse_metric_array, metric_array, riemann_array
from .bundle import BundlePoint, TangentVector, frame_matrix, frame_matrix_inverse
from .errors import Inadmissible, NotPositiveDefinite, ZeroSection
from .families import LambdaFamily
from .oracles import FDConfig, fd_exterior_derivative, nijenhuis_on_frame
from .tensors import MTensor

DENOMINATOR_EPS = 1e-8


@dataclass(frozen=True)
class StructureCoefficients:
    t: float
    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    d1: float
    d2: float
    mu: float


def _check_admissible(L: LambdaFamily, c: float, t: float, lam: float, dlam: float) -> None:
    if not t > 0:
        raise Inadmissible(t, "energy density must be positive")
    if not lam > 0:
        raise Inadmissible(t, f"lambda = {lam:.6g} is not positive")
    gap = 2.0 * c - L.A**2 * t * lam**2
    if not gap > DENOMINATOR_EPS:
        raise Inadmissible(t, f"2c - A^2 t lambda^2 = {gap:.6g} too small")
    if not lam + 2.0 * t * dlam > DENOMINATOR_EPS:
        raise Inadmissible(t, f"lambda + 2 t lambda' = {lam + 2 * t * dlam:.6g} too small")


def integrable_b1(A, c, t, lam, dlam):
    """The unique ``b1`` making J integrable over a space form of curvature ``c``."""
    return (c - A**2 * t * lam * (lam + t * dlam)) / (A * t * (lam + 2.0 * t * dlam))


def coefficients_at(L: LambdaFamily, c: float, t: float, mu: float | None = None) -> StructureCoefficients:
    lam, dlam, _ = L(t)
    _check_admissible(L, c, t, lam, dlam)
    A = L.A
    if mu is None:
        mu = dlam
    a1 = A * t * lam
    a2 = 1.0 / a1
    b1 = integrable_b1(A, c, t, lam, dlam)
    b2 = -b1 / (A * t**2 * lam * (A * lam + 2.0 * b1))
    c1 = A * t * lam**2
    c2 = 1.0 / (A * t)
    gap = 2.0 * c - A**2 * t * lam**2
    w = lam + 2.0 * t * dlam
    d1 = (lam * (c - A**2 * t * lam * (lam + t * dlam)) + mu * t * gap) / (A * t * w)
    d2 = (-c + A**2 * t * lam * (lam + t * dlam) + mu * A**2 * t**2 * w) / (A * t**2 * gap)
    return StructureCoefficients(t, a1, a2, b1, b2, c1, c2, d1, d2, mu)


def coefficient_derivatives(L: LambdaFamily, c: float, t: float) -> tuple[float, float, float, float]:
    """``t``-derivatives of ``(c1, d1, c2, d2)`` for the Kähler choice ``mu = lambda'``."""
    lam, dlam, ddlam = L(t)
    _check_admissible(L, c, t, lam, dlam)
    A = L.A
    dc1 = A * lam**2 + 2.0 * A * t * lam * dlam
    dd1 = -c / (A * t**2) - 2.0 * A * lam * dlam
    dc2 = -1.0 / (A * t**2)
    # d2 = -N / D
    num = c - A**2 * t * (lam**2 + 2 * t * lam * dlam + 2 * t**2 * dlam**2)
    dnum = -A**2 * (lam**2 + 2 * t * lam * dlam + 2 * t**2 * dlam**2) - A**2 * t * (
        4 * lam * dlam + 6 * t * dlam**2 + 2 * t * lam * ddlam + 4 * t**2 * dlam * ddlam
    )
    den = A * t**2 * (2 * c - A**2 * t * lam**2)
    dden = 2 * A * t * (2 * c - A**2 * t * lam**2) - A * t**2 * (A**2 * lam**2 + 2 * A**2 * t * lam * dlam)
    dd2 = -(dnum * den - num * dden) / den**2
    return dc1, dd1, dc2, dd2


@dataclass(frozen=True)
class LocalData:
    """Everything the closed forms need at one bundle point."""

    n: int
    c: float
    A: float
    t: float
    lam: float
    dlam: float
    ddlam: float
    p: np.ndarray
    g: np.ndarray
    gi: np.ndarray
    g0: np.ndarray
    gamma: np.ndarray
    riemann: np.ndarray
    r0: np.ndarray
    coeffs: StructureCoefficients

    @property
    def gap(self) -> float:
        """``2c - A^2 t lambda^2``."""
        return 2.0 * self.c - self.A**2 * self.t * self.lam**2

    @property
    def w(self) -> float:
        """``lambda + 2 t lambda'``."""
        return self.lam + 2.0 * self.t * self.dlam


def local_data(M: SpaceForm, L: LambdaFamily, pt: BundlePoint, mu: float | None = None) -> LocalData:
    gi = inverse_metric_array(M, pt.q)
    p = pt.p
    if not np.any(p):
        raise ZeroSection("covector is zero; point lies on the zero section")
    t = 0.5 * float(p @ gi @ p)
    lam, dlam, ddlam = L(t)
    coeffs = coefficients_at(L, M.c, t, mu)
    riemann = riemann_array(M, pt.q)
    return LocalData(
        n=M.n, c=M.c, A=L.A, t=t, lam=lam, dlam=dlam, ddlam=ddlam,
        p=p, g=metric_array(M, pt.q), gi=gi, g0=gi @ p,
        gamma=christoffel_array(M, pt.q), riemann=riemann,
        r0=np.einsum("h,hkij->kij", p, riemann), coeffs=coeffs,
    )


# --------------------------------------------------------------------------- J


def _j_blocks(d: LocalData, b1: float | None = None):
    k = d.coeffs
    if b1 is None:
        J1 = k.a1 * d.g + k.b1 * np.outer(d.p, d.p)
        coef = (d.c - d.A**2 * d.t * d.lam * (d.lam + d.t * d.dlam)) / (d.A * d.t**2 * d.lam * d.gap)
        J2 = d.gi / (d.A * d.t * d.lam) - coef * np.outer(d.g0, d.g0)
        return J1, J2
    b2 = -b1 / (d.A * d.t**2 * d.lam * (d.A * d.lam + 2.0 * b1))
    J1 = k.a1 * d.g + b1 * np.outer(d.p, d.p)
    J2 = k.a2 * d.gi + b2 * np.outer(d.g0, d.g0)
    return J1, J2


def complex_structure_at(M, L, pt, b1: float | None = None) -> tuple[MTensor, MTensor]:
    """Blocks ``(J1_ij, J2^ij)``; ``b1`` may be overridden, with ``b2`` adjusted so J^2 = -I."""
    J1, J2 = _j_blocks(local_data(M, L, pt), b1)
    return MTensor(J1, "ll", symmetric=[(0, 1)]), MTensor(J2, "uu", symmetric=[(0, 1)])


def block_antidiagonal(lower_left, upper_right) -> np.ndarray:
    n = lower_left.shape[0]
    out = np.zeros((2 * n, 2 * n))
    out[n:, :n] = lower_left
    out[:n, n:] = upper_right
    return out


def complex_structure_matrix(M, L, pt, b1: float | None = None) -> np.ndarray:
    """``J`` as a 2n x 2n matrix acting on adapted-frame components."""
    J1, J2 = _j_blocks(local_data(M, L, pt), b1)
    return block_antidiagonal(J1, -J2)


def apply_J(M, L, pt, X: TangentVector) -> TangentVector:
    J1, J2 = _j_blocks(local_data(M, L, pt))
    return TangentVector(-J2.T @ X.v, J1.T @ X.h)


# ------------------------------------------------------------------ Nijenhuis


def nijenhuis_brace(d: LocalData, b1: float) -> np.ndarray:
    """``T_kij = alpha (p_i g_jk - p_j g_ik) - R^0_kij``, the common factor of all N blocks.

    ``alpha = (a1 + 2t b1) a1' - a1 b1``; it equals ``c`` exactly when ``b1``
    takes its integrable value.
    """
    A, t, lam, dlam = d.A, d.t, d.lam, d.dlam
    alpha = A * t * (lam + 2 * t * dlam) * b1 + A**2 * t * lam * (lam + t * dlam)
    pg = np.einsum("i,jk->kij", d.p, d.g)
    return alpha * (pg - np.swapaxes(pg, 1, 2)) - d.r0


def nijenhuis_at(M, L, pt, b1: float | None = None) -> tuple[MTensor, MTensor, MTensor]:
    """Nijenhuis tensor on pairs of frame fields.

    Returns ``(NHH, NHV, NVV)`` where

    * ``NHH[i, j, k]``: d^k-component of N(delta_i, delta_j)
    * ``NHV[i, j, k]``: delta_k-component of N(delta_i, d^j)
    * ``NVV[i, j, k]``: d^k-component of N(d^i, d^j)
    """
    d = local_data(M, L, pt)
    if b1 is None:
        b1 = d.coeffs.b1
    _, J2 = _j_blocks(d, b1)
    T = nijenhuis_brace(d, b1)  # T[k, i, j]
    nhh = np.transpose(T, (1, 2, 0))
    nhv = np.einsum("kl,jr,lir->ijk", J2, J2, T)
    nvv = np.einsum("ir,jl,klr->ijk", J2, J2, T)
    return (
        MTensor(nhh, "llu", antisymmetric=[(0, 1)]),
        MTensor(nhv, "luu"),
        MTensor(nvv, "uuu", antisymmetric=[(0, 1)]),
    )


def nijenhuis_frame(M, L, pt, b1: float | None = None) -> np.ndarray:
    """``N[D, A, B]``: e_D-component of N(e_A, e_B) over the full adapted frame."""
    n = M.n
    nhh, nhv, nvv = (x.data for x in nijenhuis_at(M, L, pt, b1))
    N = np.zeros((2 * n, 2 * n, 2 * n))
    N[n:, :n, :n] = np.transpose(nhh, (2, 0, 1))
    N[:n, :n, n:] = np.transpose(nhv, (2, 0, 1))
    N[:n, n:, :n] = -np.transpose(nhv, (2, 1, 0))
    N[n:, n:, n:] = np.transpose(nvv, (2, 0, 1))
    return N


def nijenhuis_fd(M, L, pt, b1: float | None = None, cfg: FDConfig | None = None) -> np.ndarray:
    """Finite-difference ``N[D, A, B]`` from Lie brackets in induced coordinates."""
    if b1 is None:
        b1_fn = None
    else:
        # keep the perturbation fixed relative to the integrable value as t varies
        shift = b1 - local_data(M, L, pt).coeffs.b1

        def b1_fn(x):
            return local_data(M, L, x).coeffs.b1 + shift

    def structure(z):
        x = BundlePoint.from_z(z)
        E = frame_matrix(M, x)
        J = complex_structure_matrix(M, L, x, None if b1_fn is None else b1_fn(x))
        return E @ J @ frame_matrix_inverse(M, x)

    N = nijenhuis_on_frame(structure, lambda z: frame_matrix(M, BundlePoint.from_z(z)), pt.z, cfg or FDConfig())
    return np.einsum("Dn,nAB->DAB", frame_matrix_inverse(M, pt), N)


# ---------------------------------------------------------------------- G, H


def _g_blocks(d: LocalData):
    A, t, lam, dlam, c = d.A, d.t, d.lam, d.dlam, d.c
    G1 = A * t * lam**2 * d.g + (c - A**2 * t * lam**2) / (A * t) * np.outer(d.p, d.p)
    coef = (c - A**2 * t * (lam**2 + 2 * t * dlam * (lam + t * dlam))) / (A * t**2 * d.gap)
    G2 = d.gi / (A * t) - coef * np.outer(d.g0, d.g0)
    return G1, G2


def _h_blocks(d: LocalData):
    A, t, lam, dlam, c = d.A, d.t, d.lam, d.dlam, d.c
    H1 = d.gi / (A * t * lam**2) - (c - A**2 * t * lam**2) / (A * t**2 * lam**2 * d.gap) * np.outer(d.g0, d.g0)
    coef = (c - A**2 * t * (lam**2 + 2 * t * dlam * (lam + t * dlam))) / (A * t * d.w**2)
    H2 = A * t * d.g + coef * np.outer(d.p, d.p)
    return H1, H2


def metric_G_at(M, L, pt) -> tuple[MTensor, MTensor]:
    G1, G2 = _g_blocks(local_data(M, L, pt))
    for name, block in (("G1", G1), ("G2", G2)):
        smallest = np.linalg.eigvalsh(block)[0]
        if not smallest > 0:
            raise NotPositiveDefinite(f"{name} has eigenvalue {smallest:.6g}")
    return MTensor(G1, "ll", symmetric=[(0, 1)]), MTensor(G2, "uu", symmetric=[(0, 1)])


def inverse_metric_H_at(M, L, pt) -> tuple[MTensor, MTensor]:
    H1, H2 = _h_blocks(local_data(M, L, pt))
    return MTensor(H1, "uu", symmetric=[(0, 1)]), MTensor(H2, "ll", symmetric=[(0, 1)])


def block_diagonal(a, b) -> np.ndarray:
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def metric_matrix(M, L, pt) -> np.ndarray:
    return block_diagonal(*_g_blocks(local_data(M, L, pt)))


def inverse_metric_matrix(M, L, pt) -> np.ndarray:
    return block_diagonal(*_h_blocks(local_data(M, L, pt)))


def metric_G_from_coefficients(M, L, pt) -> tuple[np.ndarray, np.ndarray]:
    """Same blocks as :func:`metric_G_at`, assembled from ``c1, d1, c2, d2``."""
    d = local_data(M, L, pt)
    k = d.coeffs
    return k.c1 * d.g + k.d1 * np.outer(d.p, d.p), k.c2 * d.gi + k.d2 * np.outer(d.g0, d.g0)


def inner(M, L, pt, X: TangentVector, Y: TangentVector) -> float:
    G1, G2 = _g_blocks(local_data(M, L, pt))
    return float(X.h @ G1 @ Y.h + X.v @ G2 @ Y.v)


# ------------------------------------------------------------------------- phi


def fundamental_form_at(M, L, pt, mu: float | None = None) -> MTensor:
    """``F[i, j] = phi(d^i, delta_j) = lambda delta^i_j + mu g^{0i} p_j``."""
    d = local_data(M, L, pt)
    if mu is None:
        mu = d.dlam
    return MTensor(d.lam * np.eye(d.n) + mu * np.outer(d.g0, d.p), "ul")


def fundamental_form_matrix(M, L, pt, mu: float | None = None) -> np.ndarray:
    """``phi(e_A, e_B)`` over the adapted frame; the diagonal blocks vanish."""
    F = fundamental_form_at(M, L, pt, mu).data
    return block_antidiagonal(F, -F.T)


def fundamental_form_induced(M, L, pt, mu: float | None = None) -> np.ndarray:
    """``phi`` in induced coordinates ``(q, p)``."""
    Einv = frame_matrix_inverse(M, pt)
    return Einv.T @ fundamental_form_matrix(M, L, pt, mu) @ Einv


def dphi_components(M, L, pt, mu_override: float | None = None, cfg: FDConfig | None = None) -> np.ndarray:
    """Finite-difference ``d phi`` in induced coordinates, shape ``(2n, 2n, 2n)``."""
    local_data(M, L, pt)

    def form(z):
        return fundamental_form_induced(M, L, BundlePoint.from_z(z), mu_override)

    return fd_exterior_derivative(form, pt.z, cfg or FDConfig())


def dphi_residual(M, L, pt, mu_override: float | None = None, cfg: FDConfig | None = None) -> float:
    return float(np.max(np.abs(dphi_components(M, L, pt, mu_override, cfg))))


# ------------------------------------------------------------- admissibility

CONDITIONS = (
    "lambda_positive",
    "A_lambda_plus_2b1_positive",
    "gap_over_w_positive",
    "gap_positive",
    "w_positive",
    "lambda_plus_2t_mu_positive",
    "c1_positive",
    "c2_positive",
    "c1_plus_2t_d1_positive",
    "c2_plus_2t_d2_positive",
)


@dataclass
class AdmissibilityRow:
    t: float
    values: dict
    passed: dict

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


@dataclass
class AdmissibilityReport:
    rows: list

    @property
    def all_pass(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def admissible_t(self) -> list:
        return [r.t for r in self.rows if r.ok]

    @property
    def cutoff(self) -> float | None:
        """First grid value after which the family stops being admissible."""
        for prev, row in zip(self.rows, self.rows[1:]):
            if prev.ok and not row.ok:
                return row.t
        return None


def _raw_conditions(L: LambdaFamily, c: float, t: float) -> dict:
    A = L.A
    with np.errstate(divide="ignore", invalid="ignore"):
        try:
            lam, dlam, _ = L(t)
        except Inadmissible:
            return {name: float("nan") for name in CONDITIONS}
        lam, dlam = np.float64(lam), np.float64(dlam)
        gap = 2 * c - A**2 * t * lam**2
        w = lam + 2 * t * dlam
        b1 = (c - A**2 * t * lam * (lam + t * dlam)) / (A * t * w)
        a1, a2 = A * t * lam, 1 / (A * t * lam)
        b2 = -b1 / (A * t**2 * lam * (A * lam + 2 * b1))
        mu = dlam
        return {
            "lambda_positive": lam,
            "A_lambda_plus_2b1_positive": A * lam + 2 * b1,
            "gap_over_w_positive": gap / w,
            "gap_positive": gap,
            "w_positive": w,
            "lambda_plus_2t_mu_positive": lam + 2 * t * mu,
            "c1_positive": lam * a1,
            "c2_positive": lam * a2,
            "c1_plus_2t_d1_positive": (lam + 2 * t * mu) * (a1 + 2 * t * b1),
            "c2_plus_2t_d2_positive": (lam + 2 * t * mu) * (a2 + 2 * t * b2),
        }


def admissibility_scan(L: LambdaFamily, c: float, t_grid) -> AdmissibilityReport:
    """Evaluate every positivity condition on a grid of ``t`` values; never raises."""
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        values = {k: float(v) for k, v in _raw_conditions(L, c, float(t)).items()}
        passed = {k: bool(np.isfinite(v) and v > 0) for k, v in values.items()}
        rows.append(AdmissibilityRow(float(t), values, passed))
    return AdmissibilityReport(rows)
