"""Levi-Civita connection and curvature of the Kähler metric G.

Frame-indexed arrays use the adapted ordering ``(delta_1..delta_n,
d^1..d^n)``; capital indices A, B, ... run over ``0..2n-1``.

* ``C[D, A, B]``: nabla_{e_A} e_B = C^D_{AB} e_D
* ``K[D, C, A, B]``: K(e_A, e_B) e_C = K^D_{CAB} e_D
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base_manifold import SpaceForm
from .bundle import BundlePoint, TangentVector, bracket_structure, frame_matrix, frame_matrix_inverse
from .errors import ZeroVector
from .families import LambdaFamily
from .oracles import FDConfig, curvature_from_connection, fd_derivative, fd_gradient, koszul_connection
from .structures import (
    LocalData,
    _g_blocks,
    _h_blocks,
    coefficient_derivatives,
    complex_structure_matrix,
    local_data,
    metric_matrix,
)
from .tensors import MTensor

es = np.einsum


@dataclass(frozen=True)
class ConnectionCoefficients:
    """``Q[i, j, h] = Q^{ij}_h``, ``P[h, i, j] = P^{hi}_j``, ``S[h, i, j] = S_{hij}``."""

    Q: MTensor
    P: MTensor
    S: MTensor
    gamma: MTensor


@dataclass(frozen=True)
class CurvatureBlocks:
    """The six independent blocks of K, each stored with the index order of its name.

    * ``QQQ[h, i, j, k]``: K(delta_i, delta_j) delta_k = QQQ^h_{ijk} delta_h
    * ``QQP[k, i, j, h]``: K(delta_i, delta_j) d^k  = QQP^k_{ijh} d^h
    * ``PPQ[i, j, h, k]``: K(d^i, d^j) delta_k      = PPQ^{ijh}_k delta_h
    * ``PPP[i, j, k, h]``: K(d^i, d^j) d^k          = PPP^{ijk}_h d^h
    * ``PQQ[i, j, k, h]``: K(d^i, delta_j) delta_k  = PQQ^i_{jkh} d^h
    * ``PQP[i, k, h, j]``: K(d^i, delta_j) d^k      = PQP^{ikh}_j delta_h
    """

    QQQ: MTensor
    QQP: MTensor
    PPQ: MTensor
    PPP: MTensor
    PQQ: MTensor
    PQP: MTensor

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("QQQ", "QQP", "PPQ", "PPP", "PQQ", "PQP")}


# ------------------------------------------------------------------ connection


def _closed_form_qps(d: LocalData):
    A, t, lam, dl, ddl, c = d.A, d.t, d.lam, d.dlam, d.ddlam, d.c
    g, gi, g0, p, gap, w = d.g, d.gi, d.g0, d.p, d.gap, d.w
    eye = np.eye(d.n)
    q_coef = (
        c * lam + 8 * c * t * dl - 2 * A**2 * t**2 * lam * dl * (lam - t * dl) + 2 * t**2 * ddl * gap
    ) / (2 * t**2 * gap * w)
    Q = (
        es("ij,h->ijh", gi, p) / (2 * t)
        - (es("ih,j->ijh", eye, g0) + es("jh,i->ijh", eye, g0)) / (2 * t)
        + q_coef * es("i,j,h->ijh", g0, g0, p)
    )
    P = (
        -es("hi,j->hij", gi, p) / (2 * t)
        + es("ij,h->hij", eye, g0) / (2 * t)
        + w / (2 * t * lam) * es("hj,i->hij", eye, g0)
        - c * w / (2 * t**2 * lam * gap) * es("h,i,j->hij", g0, g0, p)
    )
    S = (
        -lam * gap / (2 * w) * es("ij,h->hij", g, p)
        - gap / 2 * es("hi,j->hij", g, p)
        + A**2 * t * lam**2 / 2 * es("hj,i->hij", g, p)
        + (3 * c * lam + 2 * c * t * dl - 2 * A**2 * t * lam**2 * (lam + t * dl)) / (2 * t * w)
        * es("h,i,j->hij", p, p, p)
    )
    return Q, P, S


def _metric_p_derivatives(d: LocalData, L: LambdaFamily):
    """``dG1[k, i, j] = d/dp_k G1_ij`` and ``dG2[k, i, j] = d/dp_k G2^ij``, analytically."""
    k = d.coeffs
    dc1, dd1, dc2, dd2 = coefficient_derivatives(L, d.c, d.t)
    g, gi, g0, p = d.g, d.gi, d.g0, d.p
    eye = np.eye(d.n)
    dG1 = (
        dc1 * es("k,ij->kij", g0, g)
        + dd1 * es("k,i,j->kij", g0, p, p)
        + k.d1 * (es("ik,j->kij", eye, p) + es("jk,i->kij", eye, p))
    )
    dG2 = (
        dc2 * es("k,ij->kij", g0, gi)
        + dd2 * es("k,i,j->kij", g0, g0, g0)
        + k.d2 * (es("ik,j->kij", gi, g0) + es("jk,i->kij", gi, g0))
    )
    return dG1, dG2


def _generic_qps(d: LocalData, L: LambdaFamily):
    H1, H2 = _h_blocks(d)
    _, G2 = _g_blocks(d)
    dG1, dG2 = _metric_p_derivatives(d, L)
    Q = 0.5 * es("hk,ijk->ijh", H2, dG2 + np.transpose(dG2, (1, 0, 2)) - np.transpose(dG2, (1, 2, 0)))
    P = 0.5 * es("hk,ijk->hij", H1, dG1 - es("il,ljk->ijk", G2, d.r0))
    S = -0.5 * es("hk,kij->hij", H2, dG1) + 0.5 * d.r0
    return Q, P, S


def _wrap(Q, P, S, gamma) -> ConnectionCoefficients:
    return ConnectionCoefficients(
        MTensor(Q, "uul", symmetric=[(0, 1)]),
        MTensor(P, "uul"),
        MTensor(S, "lll"),
        MTensor(gamma, "ull", symmetric=[(1, 2)]),
    )


def connection_at(M: SpaceForm, L: LambdaFamily, pt: BundlePoint) -> ConnectionCoefficients:
    """Explicit constant-curvature formulas for ``Q, P, S``."""
    d = local_data(M, L, pt)
    return _wrap(*_closed_form_qps(d), d.gamma)


def connection_generic(M: SpaceForm, L: LambdaFamily, pt: BundlePoint) -> ConnectionCoefficients:
    """``Q, P, S`` from contractions of the inverse blocks with ``d/dp`` of the metric blocks."""
    d = local_data(M, L, pt)
    return _wrap(*_generic_qps(d, L), d.gamma)


def frame_connection(conn: ConnectionCoefficients) -> np.ndarray:
    """Assemble ``C[D, A, B]`` from the block coefficients."""
    Q, P, S, gam = (np.asarray(x) for x in (conn.Q, conn.P, conn.S, conn.gamma))
    n = gam.shape[0]
    C = np.zeros((2 * n, 2 * n, 2 * n))
    C[:n, :n, :n] = gam  # nabla_{delta_i} delta_j = Gamma^h_ij delta_h + S_hij d^h
    C[n:, :n, :n] = S
    C[n:, :n, n:] = -np.transpose(gam, (2, 1, 0))  # nabla_{delta_i} d^j = -Gamma^j_ih d^h + P^hj_i delta_h
    C[:n, :n, n:] = np.transpose(P, (0, 2, 1))
    C[:n, n:, :n] = P  # nabla_{d^i} delta_j = P^hi_j delta_h
    C[n:, n:, n:] = np.transpose(Q, (2, 0, 1))  # nabla_{d^i} d^j = Q^ij_h d^h
    return C


def frame_connection_at(M, L, pt) -> np.ndarray:
    return frame_connection(connection_at(M, L, pt))


def torsion_residual(M, L, pt) -> float:
    """``max |C^D_AB - C^D_BA - c^D_AB|`` using the exact frame brackets."""
    C = frame_connection_at(M, L, pt)
    T = C - np.swapaxes(C, 1, 2) - bracket_structure(M, pt)
    return float(np.max(np.abs(T)))


# ----------------------------------------------------- frame differentiation


def frame_derivatives(field, M: SpaceForm, pt: BundlePoint, cfg: FDConfig = FDConfig()) -> np.ndarray:
    """``out[A, ...] = e_A(field)``, the derivative along each adapted frame vector."""
    E = frame_matrix(M, pt)
    z = pt.z

    def f(w):
        return field(BundlePoint.from_z(w))

    return np.stack([fd_derivative(f, z, E[:, a], cfg) for a in range(E.shape[1])])


def metric_compatibility_residual(M, L, pt, cfg: FDConfig = FDConfig()) -> float:
    """``max |(nabla_E G)_AB|`` with FD frame derivatives of the metric components."""
    C = frame_connection_at(M, L, pt)
    G = metric_matrix(M, L, pt)
    dG = frame_derivatives(lambda x: metric_matrix(M, L, x), M, pt, cfg)
    nabla = dG - es("FEA,FB->EAB", C, G) - es("FEB,AF->EAB", C, G)
    return float(np.max(np.abs(nabla)) / np.max(np.abs(G)))


def nabla_J_residual(M, L, pt, cfg: FDConfig = FDConfig()) -> float:
    C = frame_connection_at(M, L, pt)
    J = complex_structure_matrix(M, L, pt)
    dJ = frame_derivatives(lambda x: complex_structure_matrix(M, L, x), M, pt, cfg)
    nabla = dJ + es("DEF,FB->EDB", C, J) - es("FEB,DF->EDB", C, J)
    return float(np.max(np.abs(nabla)) / np.max(np.abs(J)))


# ------------------------------------------------------------------- curvature


def _closed_form_blocks(d: LocalData):
    A, t, lam, dl, c = d.A, d.t, d.lam, d.dlam, d.c
    g, gi, g0, p, gap, w = d.g, d.gi, d.g0, d.p, d.gap, d.w
    eye = np.eye(d.n)
    QQQ = lam**2 * (
        A**2 * t / 2 * (es("hi,jk->hijk", eye, g) - es("hj,ik->hijk", eye, g))
        + A**2 / 4 * (es("ik,j,h->hijk", g, p, g0) - es("jk,i,h->hijk", g, p, g0))
        - A**2 / 4 * (es("hi,j,k->hijk", eye, p, p) - es("hj,i,k->hijk", eye, p, p))
    )
    PPQ = (
        -1 / (2 * t) * (es("ik,jh->ijhk", eye, gi) - es("jk,ih->ijhk", eye, gi))
        - 1 / (4 * t**2) * (es("ih,j,k->ijhk", gi, g0, p) - es("jh,i,k->ijhk", gi, g0, p))
        + 1 / (4 * t**2) * (es("ik,j,h->ijhk", eye, g0, g0) - es("jk,i,h->ijhk", eye, g0, g0))
    )
    PQQ = (
        A**2 * t * lam**2 / 2 * es("ij,hk->ijkh", eye, g)
        + lam * gap / (4 * t * w) * es("ik,h,j->ijkh", eye, p, p)
        + lam * (c - A**2 * lam * t * (lam + t * dl)) / (2 * t * w) * es("ij,h,k->ijkh", eye, p, p)
        + gap / (4 * t) * es("ih,j,k->ijkh", eye, p, p)
        + A**2 * lam**2 / 4 * es("i,jk,h->ijkh", g0, g, p)
        + A**2 * t * lam * dl / 2 * es("i,hk,j->ijkh", g0, g, p)
        + A**2 * lam * w / 4 * es("i,hj,k->ijkh", g0, g, p)
        - lam * (c + 2 * A**2 * t**2 * dl * (lam + t * dl)) / (2 * t**2 * w) * es("i,h,j,k->ijkh", g0, p, p, p)
    )
    PQP = (
        -1 / (2 * t) * es("ij,hk->ikhj", eye, gi)
        - 1 / (4 * t**2) * es("ik,h,j->ikhj", gi, g0, p)
        - dl / (2 * t * lam) * es("hk,i,j->ikhj", gi, g0, p)
        - w / (4 * t**2 * lam) * es("hi,k,j->ikhj", gi, g0, p)
        - A**2 * lam * w / (4 * t * gap) * es("kj,h,i->ikhj", eye, g0, g0)
        + (c - A**2 * t * lam * (lam + t * dl)) / (2 * t**2 * gap) * es("ij,h,k->ikhj", eye, g0, g0)
        - A**2 * w**2 / (4 * t * gap) * es("hj,i,k->ikhj", eye, g0, g0)
        + c * w / (2 * t**3 * lam * gap) * es("h,i,k,j->ikhj", g0, g0, g0, p)
    )
    return QQQ, -QQQ, PPQ, -PPQ, PQQ, PQP


def curvature_at(M: SpaceForm, L: LambdaFamily, pt: BundlePoint) -> CurvatureBlocks:
    QQQ, QQP, PPQ, PPP, PQQ, PQP = _closed_form_blocks(local_data(M, L, pt))
    return CurvatureBlocks(
        MTensor(QQQ, "ulll", antisymmetric=[(1, 2)]),
        MTensor(QQP, "ulll", antisymmetric=[(1, 2)]),
        MTensor(PPQ, "uuul", antisymmetric=[(0, 1)]),
        MTensor(PPP, "uuul", antisymmetric=[(0, 1)]),
        MTensor(PQQ, "ulll"),
        MTensor(PQP, "uuul"),
    )


def frame_curvature(blocks: CurvatureBlocks) -> np.ndarray:
    """Full ``K[D, C, A, B]`` from the six blocks, antisymmetric in ``(A, B)``."""
    b = {k: np.asarray(v) for k, v in blocks.as_dict().items()}
    n = b["QQQ"].shape[0]
    K = np.zeros((2 * n,) * 4)
    K[:n, :n, :n, :n] = np.transpose(b["QQQ"], (0, 3, 1, 2))
    K[n:, n:, :n, :n] = np.transpose(b["QQP"], (3, 0, 1, 2))
    K[:n, :n, n:, n:] = np.transpose(b["PPQ"], (2, 3, 0, 1))
    K[n:, n:, n:, n:] = np.transpose(b["PPP"], (3, 2, 0, 1))
    pqq = np.transpose(b["PQQ"], (3, 2, 0, 1))  # [h, k, i, j]
    K[n:, :n, n:, :n] = pqq
    K[n:, :n, :n, n:] = -np.swapaxes(pqq, 2, 3)
    pqp = np.transpose(b["PQP"], (2, 1, 0, 3))  # [h, k, i, j]
    K[:n, n:, n:, :n] = pqp
    K[:n, n:, :n, n:] = -np.swapaxes(pqp, 2, 3)
    return K


def frame_curvature_at(M, L, pt) -> np.ndarray:
    return frame_curvature(curvature_at(M, L, pt))


def split_blocks(K: np.ndarray) -> dict:
    """Inverse of :func:`frame_curvature`: the six named blocks of a full frame curvature."""
    n = K.shape[0] // 2
    return {
        "QQQ": np.transpose(K[:n, :n, :n, :n], (0, 2, 3, 1)),
        "QQP": np.transpose(K[n:, n:, :n, :n], (1, 2, 3, 0)),
        "PPQ": np.transpose(K[:n, :n, n:, n:], (2, 3, 0, 1)),
        "PPP": np.transpose(K[n:, n:, n:, n:], (2, 3, 1, 0)),
        "PQQ": np.transpose(K[n:, :n, n:, :n], (2, 3, 1, 0)),
        "PQP": np.transpose(K[:n, n:, n:, :n], (2, 1, 0, 3)),
    }


def curvature_from_frame_connection(M, L, pt, cfg: FDConfig = FDConfig()) -> np.ndarray:
    """``K`` from the definition, differentiating ``C`` along the frame fields."""
    C = frame_connection_at(M, L, pt)
    dC = frame_derivatives(lambda x: frame_connection_at(M, L, x), M, pt, cfg)  # dC[E, D, A, B]
    c = bracket_structure(M, pt)
    K = (
        es("ADBC->DCAB", dC)
        - es("BDAC->DCAB", dC)
        + es("DAE,EBC->DCAB", C, C)
        - es("DBE,EAC->DCAB", C, C)
        - es("EAB,DEC->DCAB", c, C)
    )
    return K


def pair_symmetry_residual(M, L, pt) -> float:
    """``max |K_ABCD - K_CDAB|`` for the fully lowered curvature."""
    G = metric_matrix(M, L, pt)
    K = frame_curvature_at(M, L, pt)
    low = es("XCAB,XD->ABCD", K, G)  # G(K(e_A, e_B) e_C, e_D)
    return float(np.max(np.abs(low - np.transpose(low, (2, 3, 0, 1)))) / np.max(np.abs(low)))


# ------------------------------------------------------- Koszul oracle routes


def induced_metric(M, L, z) -> np.ndarray:
    """The full 2n x 2n metric of G in induced coordinates ``(q, p)``."""
    pt = BundlePoint.from_z(z)
    Einv = frame_matrix_inverse(M, pt)
    return Einv.T @ metric_matrix(M, L, pt) @ Einv


KOSZUL_FD = FDConfig(h=1e-4, scheme="richardson")
CURVATURE_FD = FDConfig(h=1e-3, scheme="richardson")


def koszul_frame_connection(M, L, pt, cfg: FDConfig = KOSZUL_FD) -> np.ndarray:
    """``C[D, A, B]`` from Koszul Christoffels in induced coordinates, moved to the frame."""
    z = pt.z
    gam = koszul_connection(lambda w: induced_metric(M, L, w), z, cfg)
    E = frame_matrix(M, pt)
    dE = fd_gradient(lambda w: frame_matrix(M, BundlePoint.from_z(w)), z, cfg)
    cov = es("mA,mnB->nAB", E, dE) + es("nmr,mA,rB->nAB", gam, E, E)
    return es("Dn,nAB->DAB", frame_matrix_inverse(M, pt), cov)


def koszul_frame_curvature(M, L, pt, inner: FDConfig = KOSZUL_FD, outer: FDConfig = CURVATURE_FD) -> np.ndarray:
    """Frame curvature from FD-of-FD of the induced metric."""

    def conn(w):
        return koszul_connection(lambda u: induced_metric(M, L, u), w, inner)

    R = curvature_from_connection(conn, pt.z, outer)
    E = frame_matrix(M, pt)
    return es("Da,abcd,bC,cA,dB->DCAB", frame_matrix_inverse(M, pt), R, E, E, E)


# --------------------------------------------------------------------- Ricci


def ricci_from_frame_curvature(K: np.ndarray) -> np.ndarray:
    """``Ric(e_B, e_C) = sum_A K^A_{CAB}``."""
    return es("ACAB->BC", K)


def ricci_at(M, L, pt, K: np.ndarray | None = None) -> tuple[MTensor, MTensor, float]:
    """Horizontal and vertical Ricci blocks plus the largest mixed component."""
    if K is None:
        K = frame_curvature_at(M, L, pt)
    ric = ricci_from_frame_curvature(K)
    n = M.n
    mixed = float(max(np.max(np.abs(ric[:n, n:])), np.max(np.abs(ric[n:, :n]))))
    return MTensor(ric[:n, :n], "ll"), MTensor(ric[n:, n:], "uu"), mixed


def einstein_residual(M, L, pt, K: np.ndarray | None = None) -> float:
    """``|Ric - (A n / 2) G| / |G|`` in the max norm over the full frame."""
    if K is None:
        K = frame_curvature_at(M, L, pt)
    G = metric_matrix(M, L, pt)
    ric = ricci_from_frame_curvature(K)
    return float(np.max(np.abs(ric - 0.5 * L.A * M.n * G)) / np.max(np.abs(G)))


# ----------------------------------------------------------- local symmetry


def nabla_K(M, L, pt, cfg: FDConfig = FDConfig()) -> np.ndarray:
    """``(nabla_{e_E} K)^D_{CAB}`` as an array ``[E, D, C, A, B]``."""
    C = frame_connection_at(M, L, pt)
    K = frame_curvature_at(M, L, pt)
    dK = frame_derivatives(lambda x: frame_curvature_at(M, L, x), M, pt, cfg)
    return (
        dK
        + es("DEF,FCAB->EDCAB", C, K)
        - es("FEA,DCFB->EDCAB", C, K)
        - es("FEB,DCAF->EDCAB", C, K)
        - es("FEC,DFAB->EDCAB", C, K)
    )


def nabla_K_by_combination(M, L, pt, cfg: FDConfig = FDConfig()) -> dict:
    """Scaled residual for each of the 16 horizontal/vertical choices of (E, A, B, C)."""
    n = M.n
    nk = nabla_K(M, L, pt, cfg)
    scale = max(1.0, float(np.max(np.abs(frame_curvature_at(M, L, pt)))))
    parts = {"h": slice(0, n), "v": slice(n, 2 * n)}
    out = {}
    for e in "hv":
        for a in "hv":
            for b in "hv":
                for c in "hv":
                    block = nk[parts[e], :, parts[c], parts[a], parts[b]]
                    out[e + a + b + c] = float(np.max(np.abs(block))) / scale
    return out


def nabla_K_residual(M, L, pt, cfg: FDConfig = FDConfig()) -> float:
    return max(nabla_K_by_combination(M, L, pt, cfg).values())


def frame_identity_residuals(M, L, pt, cfg: FDConfig = FDConfig()) -> dict:
    """Horizontal and vertical frame derivatives of the four independent curvature
    blocks against the algebraic connection terms that should equal them.

    Horizontal derivatives pair with Gamma on every slot. Vertical derivatives
    pair with P on horizontal slots and with Q on vertical slots, mirroring
    ``nabla_{d^l} delta_k = P^{sl}_k delta_s`` and ``nabla_{d^l} d^i = Q^{li}_s d^s``.

    Keys are ``"<block>/<h|v>"``; values are max residuals scaled by the block size.
    """
    n = M.n
    d = local_data(M, L, pt)
    gam = d.gamma
    conn = connection_at(M, L, pt)
    P, Q = np.asarray(conn.P), np.asarray(conn.Q)
    blocks = curvature_at(M, L, pt).as_dict()

    def block_field(name):
        return lambda x: np.asarray(curvature_at(M, L, x).as_dict()[name])

    out = {}
    for name in ("QQQ", "PPQ", "PQQ", "PQP"):
        B = np.asarray(blocks[name])
        dB = frame_derivatives(block_field(name), M, pt, cfg)
        dh, dv = dB[:n], dB[n:]
        if name == "QQQ":
            rh = -es("hls,sijk->lhijk", gam, B) + es("sli,hsjk->lhijk", gam, B) + es("slj,hisk->lhijk", gam, B) + es("slk,hijs->lhijk", gam, B)
            rv = -es("hls,sijk->lhijk", P, B) + es("sli,hsjk->lhijk", P, B) + es("slj,hisk->lhijk", P, B) + es("slk,hijs->lhijk", P, B)
        elif name == "PPQ":
            rh = es("slk,ijhs->lijhk", gam, B) - es("ils,sjhk->lijhk", gam, B) - es("jls,ishk->lijhk", gam, B) - es("hls,ijsk->lijhk", gam, B)
            rv = es("slk,ijhs->lijhk", P, B) + es("lis,sjhk->lijhk", Q, B) + es("ljs,ishk->lijhk", Q, B) - es("hls,ijsk->lijhk", P, B)
        elif name == "PQQ":
            rh = -es("ils,sjkh->lijkh", gam, B) + es("slj,iskh->lijkh", gam, B) + es("slk,ijsh->lijkh", gam, B) + es("slh,ijks->lijkh", gam, B)
            rv = es("lis,sjkh->lijkh", Q, B) + es("slj,iskh->lijkh", P, B) + es("slk,ijsh->lijkh", P, B) - es("lsh,ijks->lijkh", Q, B)
        else:  # PQP[i, k, h, j]
            rh = es("slj,ikhs->likhj", gam, B) - es("ils,skhj->likhj", gam, B) - es("kls,ishj->likhj", gam, B) - es("hls,iksj->likhj", gam, B)
            rv = es("slj,ikhs->likhj", P, B) + es("lis,skhj->likhj", Q, B) + es("lks,ishj->likhj", Q, B) - es("hls,iksj->likhj", P, B)
        scale = max(1.0, float(np.max(np.abs(B))))
        out[f"{name}/h"] = float(np.max(np.abs(dh - rh))) / scale
        out[f"{name}/v"] = float(np.max(np.abs(dv - rv))) / scale
    return out


# ----------------------------------------------- holomorphic sectional curvature


def holomorphic_sectional_curvature(M, L, pt, X: TangentVector) -> float:
    """``G(K(X, JX) JX, X) / G(X, X)^2``."""
    x = X.components
    if not np.any(x):
        raise ZeroVector("holomorphic curvature needs a nonzero vector")
    G = metric_matrix(M, L, pt)
    J = complex_structure_matrix(M, L, pt)
    K = frame_curvature_at(M, L, pt)
    jx = J @ x
    kx = es("DCAB,A,B,C->D", K, x, jx, jx)
    return float(kx @ G @ x) / float(x @ G @ x) ** 2
