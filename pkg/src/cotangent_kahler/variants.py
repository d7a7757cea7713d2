"""Alternative closed forms that the oracles reject.

These are kept so a verification run can show, block by block, how far they
sit from the finite-difference ground truth. Nothing else in the package
uses them.
"""
from __future__ import annotations

import numpy as np

from .connection import connection_at, curvature_at, frame_derivatives
from .oracles import FDConfig
from .structures import LocalData, local_data

es = np.einsum


def nijenhuis_brace_alt(d: LocalData, b1: float) -> np.ndarray:
    """Brace with ``alpha = A t (lambda + 2t lambda') (b1 + A lambda)``.

    Under the integrable ``b1`` this gives ``alpha = c + A^2 t^2 lambda lambda'``,
    so the horizontal block does not vanish unless ``lambda' = 0``.
    """
    alpha = d.A * d.t * d.w * (b1 + d.A * d.lam)
    pg = es("i,jk->kij", d.p, d.g)
    return alpha * (pg - np.swapaxes(pg, 1, 2)) - d.r0


def vertical_identity_alt_residuals(M, L, pt, cfg: FDConfig = FDConfig()) -> dict:
    """Vertical-derivative identities for PPQ, PQQ, PQP written with ``-P^{il}_s``
    on the vertical slots instead of ``+Q^{li}_s`` (and ``+P^{sl}_h`` instead of
    ``-Q^{ls}_h`` on the PQQ output slot).
    """
    n = M.n
    P = np.asarray(connection_at(M, L, pt).P)
    blocks = {k: np.asarray(v) for k, v in curvature_at(M, L, pt).as_dict().items()}
    out = {}
    for name in ("PPQ", "PQQ", "PQP"):
        B = blocks[name]
        dv = frame_derivatives(lambda x, nm=name: np.asarray(curvature_at(M, L, x).as_dict()[nm]), M, pt, cfg)[n:]
        if name == "PPQ":
            rv = es("slk,ijhs->lijhk", P, B) - es("ils,sjhk->lijhk", P, B) - es("jls,ishk->lijhk", P, B) - es("hls,ijsk->lijhk", P, B)
        elif name == "PQQ":
            rv = -es("ils,sjkh->lijkh", P, B) + es("slj,iskh->lijkh", P, B) + es("slk,ijsh->lijkh", P, B) + es("slh,ijks->lijkh", P, B)
        else:
            rv = es("slj,ikhs->likhj", P, B) - es("ils,skhj->likhj", P, B) - es("kls,ishj->likhj", P, B) - es("hls,iksj->likhj", P, B)
        diff = np.abs(dv - rv)
        idx = np.unravel_index(np.argmax(diff), diff.shape)
        out[name] = (float(diff[idx]) / max(1.0, float(np.max(np.abs(B)))), tuple(int(i) for i in idx))
    return out


def nijenhuis_alt_residual(M, L, pt) -> tuple[float, tuple]:
    d = local_data(M, L, pt)
    T = np.abs(nijenhuis_brace_alt(d, d.coeffs.b1))
    idx = np.unravel_index(np.argmax(T), T.shape)
    return float(T[idx]) / (1.0 + float(np.max(np.abs(d.r0)))), tuple(int(i) for i in idx)
