"""Sampling harness that runs the full battery of identity checks.

A run draws admissible bundle points from a seeded generator, evaluates each
selected check at every point, and reduces per-point residuals with ``max``
so the result does not depend on evaluation order.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import connection as conn
from . import structures as st
from . import variants
from .base_manifold import SpaceForm
from .bundle import BundlePoint, TangentVector, point_with_energy, sample_point
from .errors import ConfigError, GeometryError, NoAdmissiblePoints
from .families import ConstantFamily, ExampleFamily, LambdaFamily, TabulatedFamily
from .oracles import FDConfig

log = logging.getLogger(__name__)

REPORT_VERSION = 1

DEFAULT_TOLERANCES = {
    "tol_exact": 1e-10,
    "tol_fd1": 1e-6,
    "tol_fd2": 1e-5,
    "tol_nablaK": 1e-4,
    "tol_inverse": 1e-11,
    "tol_identity": 1e-11,
    "tol_torsion": 1e-9,
    "tol_ricci_mixed": 1e-9,
    "tol_einstein": 1e-8,
    "tol_pair": 1e-8,
}

# check id -> (claim, tolerance key)
CHECKS = {
    "coefficient_identities": ("a1 a2 = 1, (a1+2tb1)(a2+2tb2) = 1 and the G/J proportionality relations", "tol_identity"),
    "almost_complex": ("J(JX) = -X", "tol_exact"),
    "hermitian": ("G(JX, JY) = G(X, Y)", "tol_exact"),
    "inverse_metric": ("closed-form H inverts G", "tol_inverse"),
    "nijenhuis": ("closed-form Nijenhuis tensor vanishes for the integrable b1", "tol_exact"),
    "nijenhuis_fd": ("Nijenhuis tensor from finite-difference brackets vanishes", "tol_fd2"),
    "nijenhuis_dual_route": ("closed-form Nijenhuis tensor matches brackets for perturbed b1", "tol_fd2"),
    "nijenhuis_only_if": ("perturbing b1 by 0.1 breaks integrability (fraction of points with max|N| <= 1e-3)", None),
    "kahler": ("d phi = 0 for mu = lambda'", "tol_fd1"),
    "kahler_only_if": ("d phi != 0 for mu = lambda' + 1 at |p| = 1 (ratio 1e-2 / min residual)", None),
    "phi_equals_G_J": ("phi(X, Y) = G(X, JY)", "tol_exact"),
    "connection_generic": ("explicit Q, P, S match the H-contraction form", "tol_exact"),
    "connection_koszul": ("explicit connection matches Koszul finite differences", "tol_fd1"),
    "torsion": ("connection is torsion free", "tol_torsion"),
    "metric_compatibility": ("nabla G = 0", "tol_fd1"),
    "nabla_J": ("nabla J = 0", "tol_fd2"),
    "curvature_koszul": ("six curvature blocks match Koszul-route curvature", "tol_fd2"),
    "curvature_frame_route": ("six curvature blocks match frame-derivative curvature of the connection", "tol_fd2"),
    "curvature_symmetries": ("block antisymmetries and K_ABCD = K_CDAB", "tol_pair"),
    "einstein": ("Ric = (A n / 2) G from the closed-form curvature", "tol_einstein"),
    "einstein_oracle": ("Ric = (A n / 2) G from the Koszul-route curvature", "tol_fd2"),
    "ricci_mixed": ("mixed Ricci block vanishes", "tol_ricci_mixed"),
    "nabla_K": ("nabla K = 0 over all 16 frame combinations", "tol_nablaK"),
    "frame_identities": ("frame derivatives of QQQ, PPQ, PQQ, PQP equal their connection terms", "tol_fd2"),
    "holomorphic_nonconstancy": ("holomorphic sectional curvature is not constant (ratio 1e-3 / max spread)", None),
    "admissibility": ("positivity conditions hold on t in [0.1, 10] (fraction of failing grid rows)", None),
}

_LOWER_BOUND = {"kahler_only_if": 1e-2, "holomorphic_nonconstancy": 1e-3}
_FIXED_TOL = {"nijenhuis_only_if": 0.05, "kahler_only_if": 1.0, "holomorphic_nonconstancy": 1.0, "admissibility": 1e-12}

VECTORS_PER_POINT = 5


@dataclass
class RunConfig:
    n: int = 3
    c: float = 1.0
    A: float = 1.0
    family: dict = field(default_factory=lambda: {"type": "example", "B": 1.0})
    samples: int = 200
    seed: int = 42
    t_min: float = 0.05
    t_max: float = 5.0
    fd: dict = field(default_factory=lambda: {"h": 1e-5, "scheme": "central", "scale_guard": 1.0})
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    checks: list | None = None
    mu_override: float | None = None
    workers: int = 1

    def validate(self) -> "RunConfig":
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n!r}")
        if int(self.samples) != self.samples or self.samples < 1:
            raise ConfigError(f"samples must be a positive integer, got {self.samples!r}")
        if not (self.c > 0 and self.A > 0):
            raise ConfigError("c and A must be positive")
        if not 0 < self.t_min < self.t_max:
            raise ConfigError(f"need 0 < t_min < t_max, got {self.t_min!r}, {self.t_max!r}")
        bad = {k: v for k, v in self.tolerances.items() if not (isinstance(v, (int, float)) and v > 0)}
        if bad:
            raise ConfigError(f"tolerances must be positive: {bad}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        self.tolerances = {**DEFAULT_TOLERANCES, **self.tolerances}
        if self.checks is not None:
            unknown = set(self.checks) - set(CHECKS)
            if unknown:
                raise ConfigError(f"unknown checks: {sorted(unknown)}")
        if self.family.get("type") not in ("example", "constant", "tabulated"):
            raise ConfigError(f"unknown family {self.family!r}")
        try:
            self.fd_config()
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad fd settings: {exc}") from exc
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        return self

    def fd_config(self) -> FDConfig:
        return FDConfig(**self.fd)

    def space_form(self) -> SpaceForm:
        return SpaceForm(int(self.n), float(self.c))

    def lambda_family(self) -> LambdaFamily:
        fam = dict(self.family)
        kind = fam.pop("type")
        try:
            if kind == "example":
                return ExampleFamily(A=self.A, B=float(fam.get("B", 1.0)), c=self.c)
            if kind == "constant":
                return ConstantFamily(A=self.A, lam0=float(fam.get("lam0", 1.0)))
            return TabulatedFamily.from_file(fam["path"], A=self.A)
        except (KeyError, OSError, ValueError) as exc:
            raise ConfigError(f"cannot build lambda family {self.family!r}: {exc}") from exc

    @property
    def selected(self) -> list:
        return list(CHECKS) if self.checks is None else [c for c in CHECKS if c in self.checks]


def load_config(path=None, **overrides) -> RunConfig:
    """Read a JSON config file (optional) and apply keyword overrides."""
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        cfg = RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


# ------------------------------------------------------------------ sampling


def _admissible(M, L, pt) -> bool:
    try:
        t = st.local_data(M, L, pt).t
        for s in (1.0 - 1e-3, 1.0 + 1e-3):
            st.coefficients_at(L, M.c, s * t)
    except GeometryError:
        return False
    return True


def sample_points(cfg: RunConfig, max_tries_per_point: int = 100) -> list:
    M, L = cfg.space_form(), cfg.lambda_family()
    rng = np.random.default_rng(cfg.seed)
    points, tries = [], 0
    while len(points) < cfg.samples:
        if tries >= max_tries_per_point * cfg.samples:
            raise NoAdmissiblePoints(
                f"only {len(points)} of {cfg.samples} admissible points after {tries} draws"
            )
        tries += 1
        pt = sample_point(M, rng, cfg.t_min, cfg.t_max)
        if _admissible(M, L, pt):
            points.append(pt)
    return points


# -------------------------------------------------------------------- checks


def _rel(a, b) -> float:
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


def _worst_index(a, b):
    diff = np.abs(a - b)
    return tuple(int(i) for i in np.unravel_index(np.argmax(diff), diff.shape))


def _random_vectors(rng, n, count):
    return [TangentVector(rng.standard_normal(n), rng.standard_normal(n)) for _ in range(count)]


def _point_checks(cfg: RunConfig, index: int, pt: BundlePoint) -> dict:
    """Residuals and dual-route disagreements for one point.

    Returns ``{check_id: (value, errata)}``; ``value`` is ``None`` when the
    check does not apply at this point.
    """
    M, L = cfg.space_form(), cfg.lambda_family()
    fd = cfg.fd_config()
    tol = cfg.tolerances
    rng = np.random.default_rng([cfg.seed, index])
    out = {}
    want = set(cfg.selected)
    d = st.local_data(M, L, pt)
    G = st.metric_matrix(M, L, pt)
    J = st.complex_structure_matrix(M, L, pt)
    vecs = _random_vectors(rng, M.n, VECTORS_PER_POINT)

    def put(check, value, errata=()):
        out[check] = (float(value), list(errata))

    def dual(check, block, closed, oracle, limit):
        r = _rel(closed, oracle)
        if r >= limit:
            return r, [{
                "check": check, "block": block, "point": index,
                "index": list(_worst_index(closed, oracle)),
                "closed_form": float(np.asarray(closed)[_worst_index(closed, oracle)]),
                "oracle": float(np.asarray(oracle)[_worst_index(closed, oracle)]),
                "diagnostic": "possible erratum: closed form and oracle disagree",
            }]
        return r, []

    if "coefficient_identities" in want:
        k = d.coeffs
        lam, t, mu = d.lam, d.t, k.mu
        res = [
            abs(k.a1 * k.a2 - 1.0),
            abs((k.a1 + 2 * t * k.b1) * (k.a2 + 2 * t * k.b2) - 1.0),
            abs(k.c1 - lam * k.a1) / abs(k.c1),
            abs(k.c2 - lam * k.a2) / abs(k.c2),
            abs(k.c1 + 2 * t * k.d1 - (lam + 2 * t * mu) * (k.a1 + 2 * t * k.b1)) / abs(k.c1 + 2 * t * k.d1),
            abs(k.c2 + 2 * t * k.d2 - (lam + 2 * t * mu) * (k.a2 + 2 * t * k.b2)) / abs(k.c2 + 2 * t * k.d2),
        ]
        G1c, G2c = st.metric_G_from_coefficients(M, L, pt)
        res += [_rel(G1c, G[: M.n, : M.n]), _rel(G2c, G[M.n:, M.n:])]
        put("coefficient_identities", max(res))

    if "almost_complex" in want:
        put("almost_complex", max(
            np.linalg.norm(J @ (J @ x.components) + x.components) / np.linalg.norm(x.components) for x in vecs
        ))

    if "hermitian" in want:
        def gnorm(x):
            return math.sqrt(x @ G @ x)
        res = []
        for x, y in zip(vecs, vecs[1:] + vecs[:1]):
            a, b = x.components, y.components
            res.append(abs((J @ a) @ G @ (J @ b) - a @ G @ b) / (gnorm(a) * gnorm(b)))
        put("hermitian", max(res))

    if "inverse_metric" in want:
        H = st.inverse_metric_matrix(M, L, pt)
        put("inverse_metric", max(
            float(np.max(np.abs(G @ H - np.eye(2 * M.n)))), _rel(H, np.linalg.inv(G))
        ))

    scale_n = 1.0 + float(np.max(np.abs(d.r0)))
    if "nijenhuis" in want:
        put("nijenhuis", float(np.max(np.abs(st.nijenhuis_frame(M, L, pt)))) / scale_n)
    if "nijenhuis_fd" in want:
        put("nijenhuis_fd", float(np.max(np.abs(st.nijenhuis_fd(M, L, pt, cfg=fd)))) / scale_n)
    if "nijenhuis_dual_route" in want or "nijenhuis_only_if" in want:
        b1 = d.coeffs.b1 + 0.1
        closed = st.nijenhuis_frame(M, L, pt, b1)
        if "nijenhuis_dual_route" in want:
            put("nijenhuis_dual_route", *dual("nijenhuis_dual_route", "N", closed,
                                               st.nijenhuis_fd(M, L, pt, b1, fd), tol["tol_fd2"]))
        if "nijenhuis_only_if" in want:
            put("nijenhuis_only_if", 1.0 if np.max(np.abs(closed)) <= 1e-3 else 0.0)

    if "kahler" in want:
        mu = None if cfg.mu_override is None else d.dlam + cfg.mu_override
        put("kahler", st.dphi_residual(M, L, pt, mu, fd))
    if "kahler_only_if" in want:
        unit = point_with_energy(M, pt.q, pt.p, 0.5)
        if _admissible(M, L, unit):
            mu = st.local_data(M, L, unit).dlam + 1.0
            put("kahler_only_if", st.dphi_residual(M, L, unit, mu, fd))

    if "phi_equals_G_J" in want:
        phi = st.fundamental_form_matrix(M, L, pt)
        put("phi_equals_G_J", _rel(phi, G @ J))

    if want & {"connection_generic", "connection_koszul"}:
        C = conn.frame_connection_at(M, L, pt)
        if "connection_generic" in want:
            put("connection_generic", *dual("connection_generic", "C", C,
                                             conn.frame_connection(conn.connection_generic(M, L, pt)), tol["tol_exact"]))
        if "connection_koszul" in want:
            put("connection_koszul", *dual("connection_koszul", "C", C,
                                            conn.koszul_frame_connection(M, L, pt), tol["tol_fd1"]))
    if "torsion" in want:
        put("torsion", conn.torsion_residual(M, L, pt))
    if "metric_compatibility" in want:
        put("metric_compatibility", conn.metric_compatibility_residual(M, L, pt, fd))
    if "nabla_J" in want:
        put("nabla_J", conn.nabla_J_residual(M, L, pt, fd))

    K = conn.frame_curvature_at(M, L, pt)
    blocks = conn.split_blocks(K)
    K_oracle = None
    if want & {"curvature_koszul", "einstein_oracle"}:
        K_oracle = conn.koszul_frame_curvature(M, L, pt)
    for check, make in (
        ("curvature_koszul", lambda: K_oracle),
        ("curvature_frame_route", lambda: conn.curvature_from_frame_connection(M, L, pt, fd)),
    ):
        if check in want:
            other = conn.split_blocks(make())
            worst, errata = 0.0, []
            for name, block in blocks.items():
                r, e = dual(check, name, block, other[name], tol["tol_fd2"])
                worst, errata = max(worst, r), errata + e
            put(check, worst, errata)
    if "curvature_symmetries" in want:
        res = [
            float(np.max(np.abs(blocks["QQP"] + blocks["QQQ"]))),
            float(np.max(np.abs(blocks["PPP"] + blocks["PPQ"]))),
            float(np.max(np.abs(blocks["QQQ"] + np.swapaxes(blocks["QQQ"], 1, 2)))),
            float(np.max(np.abs(blocks["PPQ"] + np.swapaxes(blocks["PPQ"], 0, 1)))),
            conn.pair_symmetry_residual(M, L, pt),
        ]
        put("curvature_symmetries", max(res))
    if "einstein" in want:
        put("einstein", conn.einstein_residual(M, L, pt, K))
    if "einstein_oracle" in want:
        put("einstein_oracle", conn.einstein_residual(M, L, pt, K_oracle))
    if "ricci_mixed" in want:
        put("ricci_mixed", conn.ricci_at(M, L, pt, K)[2])
    if "nabla_K" in want:
        combos = conn.nabla_K_by_combination(M, L, pt, fd)
        worst = max(combos, key=combos.get)
        errata = []
        if combos[worst] >= tol["tol_nablaK"]:
            errata.append({"check": "nabla_K", "block": worst, "point": index, "index": [],
                           "diagnostic": "possible erratum: covariant derivative of K does not vanish"})
        put("nabla_K", combos[worst], errata)
    if "frame_identities" in want:
        res = conn.frame_identity_residuals(M, L, pt, fd)
        errata = [{"check": "frame_identities", "block": k, "point": index, "index": [],
                   "diagnostic": "possible erratum: frame-derivative identity fails"}
                  for k, v in res.items() if v >= tol["tol_fd2"]]
        put("frame_identities", max(res.values()), errata)
    if "holomorphic_nonconstancy" in want:
        n = M.n
        e = rng.standard_normal(n)
        x1 = TangentVector(e, 1e-2 * rng.standard_normal(n))
        x2 = TangentVector(1e-2 * rng.standard_normal(n), rng.standard_normal(n))
        h1 = conn.holomorphic_sectional_curvature(M, L, pt, x1)
        h2 = conn.holomorphic_sectional_curvature(M, L, pt, x2)
        put("holomorphic_nonconstancy", abs(h1 - h2))
    return out


def _point_worker(args):
    cfg, index, z = args
    return _point_checks(cfg, index, BundlePoint.from_z(z))


# -------------------------------------------------------------------- report


@dataclass
class CheckRecord:
    check_id: str
    paper_ref: str
    samples_run: int
    max_residual: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


@dataclass
class VerificationReport:
    meta: dict
    checks: list
    errata: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_pass else 1

    def check(self, check_id: str) -> CheckRecord:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def to_dict(self) -> dict:
        return {
            "report_version": REPORT_VERSION,
            "meta": self.meta,
            "checks": [c.to_dict() for c in self.checks],
            "errata": self.errata,
        }


def _aggregate(check_id: str, values: list, tolerance: float) -> tuple[float, dict]:
    if check_id == "nijenhuis_only_if":
        return float(np.mean(values)), {"threshold": 1e-3}
    if check_id in _LOWER_BOUND:
        bound = _LOWER_BOUND[check_id]
        observed = min(values) if check_id == "kahler_only_if" else max(values)
        return (bound / observed if observed > 0 else math.inf), {"observed": observed, "bound": bound}
    return max(values), {}


def _alternative_form_errata(M, L, points, fd) -> list:
    """Disagreements of the rejected alternative forms, evaluated at the first point."""
    pt = points[0]
    out = []
    r, idx = variants.nijenhuis_alt_residual(M, L, pt)
    out.append({
        "check": "nijenhuis", "block": "N(delta_i, delta_j) brace, alpha = A t (lambda + 2t lambda')(b1 + A lambda)",
        "point": 0, "index": list(idx), "residual": r,
        "diagnostic": "superseded form: this brace is nonzero for the integrable b1; "
                      "the oracle-confirmed brace is alpha = A t (lambda + 2t lambda') b1 + A^2 t lambda (lambda + t lambda')",
    })
    for name, (r, idx) in variants.vertical_identity_alt_residuals(M, L, pt, fd).items():
        out.append({
            "check": "frame_identities", "block": f"{name}/v with -P on vertical slots",
            "point": 0, "index": list(idx), "residual": r,
            "diagnostic": "superseded form: vertical slots need +Q^{li}_s, as nabla_{d^l} d^i = Q^{li}_s d^s",
        })
    return out


def run_verification(cfg: RunConfig) -> VerificationReport:
    cfg.validate()
    start = time.perf_counter()
    M, L = cfg.space_form(), cfg.lambda_family()
    points = sample_points(cfg)
    jobs = [(cfg, i, pt.z) for i, pt in enumerate(points)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_point_worker, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        results = [_point_worker(job) for job in jobs]

    records, errata = [], []
    for check_id in cfg.selected:
        claim, tol_key = CHECKS[check_id]
        tolerance = _FIXED_TOL[check_id] if tol_key is None else cfg.tolerances[tol_key]
        if check_id == "admissibility":
            scan = st.admissibility_scan(L, M.c, np.linspace(0.1, 10.0, 100))
            value = 1.0 - len(scan.admissible_t) / len(scan.rows)
            records.append(CheckRecord(check_id, claim, len(scan.rows), value, tolerance, value < tolerance,
                                       {"cutoff": scan.cutoff}))
            continue
        values = []
        for res in results:
            if check_id in res:
                values.append(res[check_id][0])
                errata.extend(res[check_id][1])
        if not values:
            records.append(CheckRecord(check_id, claim, 0, math.nan, tolerance, False, {"reason": "no applicable points"}))
            continue
        value, detail = _aggregate(check_id, values, tolerance)
        records.append(CheckRecord(check_id, claim, len(values), value, tolerance, bool(value < tolerance), detail))

    if {"nijenhuis", "frame_identities"} & set(cfg.selected):
        errata.extend(_alternative_form_errata(M, L, points, cfg.fd_config()))
    meta = {
        "config": asdict(cfg),
        "seed": cfg.seed,
        "points": len(points),
        "wall_time_s": time.perf_counter() - start,
    }
    log.info("verification finished in %.1f s", meta["wall_time_s"])
    return VerificationReport(meta, records, errata)


# ------------------------------------------------------------ admissibility


def scan_admissibility(cfg: RunConfig, t_grid) -> str:
    """CSV table with one row per grid value: t, each condition's value and pass flag."""
    t_grid = np.asarray(t_grid, dtype=float).reshape(-1)
    if t_grid.size == 0:
        raise ConfigError("t grid is empty")
    if np.any(~np.isfinite(t_grid)) or np.any(t_grid <= 0):
        raise ConfigError("t grid must be finite and strictly positive")
    report = st.admissibility_scan(cfg.lambda_family(), cfg.c, t_grid)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", *st.CONDITIONS, *(f"{c}_pass" for c in st.CONDITIONS), "all_pass"])
    for row in report.rows:
        writer.writerow([
            _fmt(row.t),
            *(_fmt(row.values[c]) for c in st.CONDITIONS),
            *(int(row.passed[c]) for c in st.CONDITIONS),
            int(row.ok),
        ])
    return buf.getvalue()


# --------------------------------------------------------------- emitters


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj) if math.isfinite(obj) else json.dumps(str(float(obj)))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit_report(report: VerificationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (_json(report.to_dict()) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["report_version", "check_id", "paper_ref", "samples_run", "max_residual", "tolerance", "pass"])
        for c in report.checks:
            writer.writerow([REPORT_VERSION, c.check_id, c.paper_ref, c.samples_run,
                             _fmt(c.max_residual), _fmt(c.tolerance), int(c.passed)])
        return buf.getvalue().encode()
    if fmt == "text":
        width = max([len(c.check_id) for c in report.checks] + [8])
        lines = [f"{'check':<{width}}  {'samples':>7}  {'max_residual':>12}  {'tolerance':>9}  result"]
        for c in report.checks:
            lines.append(
                f"{c.check_id:<{width}}  {c.samples_run:>7d}  {c.max_residual:>12.3e}  {c.tolerance:>9.1e}  "
                f"{'PASS' if c.passed else 'FAIL'}"
            )
        if report.errata:
            lines.append("")
            lines.append(f"{len(report.errata)} erratum flag(s):")
            for e in report.errata:
                lines.append(f"  [{e['check']}] {e['block']}: {e['diagnostic']}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown report format {fmt!r}")
