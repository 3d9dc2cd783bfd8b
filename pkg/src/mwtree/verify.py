"""Residual checks: matrix identities and closed forms against the LU oracle.

Each check returns a :class:`ResidualReport`.  ``ratio`` is the Frobenius
residual over ``max(|LHS|, |RHS|, 1)``, so it does not depend on which side is
called which.  Reports for trees whose weights do not commute are produced
but not asserted (``asserted=False``).
"""
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BetaSingular, Singular
from .formulas import beta, det_formula, eta, inverse_formula
from .linalg import fro_norm, kron, lu_decompose, lu_inverse
from .matrices import build
from .tree import classify_weights, degree_profile

DEFAULT_TOLERANCES = {
    "laplacian_factorization": 1e-8,
    "orientation_det": 1e-9,
    "orientation_inverse": 1e-8,
    "laplacian_distance": 1e-8,
    "squared_distance_tau": 1e-8,
    "incidence_congruence": 1e-8,
    "squared_distance_laplacian": 1e-8,
    "squared_distance_eta": 1e-8,
    "det_vs_oracle": 1e-6,
    "inverse_vs_oracle": 1e-6,
    # zero-determinant branches: smallest LU pivot relative to max |entry|
    "singular_pivot": 1e-10,
}

IDENTITIES = tuple(k for k in DEFAULT_TOLERANCES if k != "singular_pivot")


@dataclass
class ResidualReport:
    identity: str
    residual: float
    scale: float
    ratio: float
    tolerance: float
    status: str          # "pass" | "fail" | "skip"
    regime: str          # "diagonal" | "commuting" | "general"
    asserted: bool = True
    note: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    @property
    def failed(self):
        return self.status == "fail" and self.asserted

    def to_record(self):
        rec = asdict(self)
        for k in ("residual", "scale", "ratio"):
            if not math.isfinite(rec[k]):
                rec[k] = None
        return rec


class _Ctx:
    """Per-tree cache shared by the checks of one :func:`run_all` call."""

    def __init__(self, t, mats=None, tolerances=None):
        self.t = t
        self.m = mats if mats is not None else build(t)
        self.prof = degree_profile(t)
        self.regime = classify_weights(t)
        self.tol = dict(DEFAULT_TOLERANCES)
        if tolerances:
            self.tol.update(tolerances)

    def report(self, name, residual, scale, tol_key=None, note="", detail=None):
        ratio = residual / scale if scale > 0 else residual
        tol = self.tol[tol_key or name]
        status = "pass" if ratio <= tol else "fail"
        return ResidualReport(
            identity=name, residual=float(residual), scale=float(scale), ratio=float(ratio),
            tolerance=tol, status=status, regime=self.regime,
            asserted=self.regime != "general", note=note, detail=detail or {},
        )

    def compare(self, name, lhs, rhs, note=""):
        scale = max(fro_norm(lhs), fro_norm(rhs), 1.0)
        return self.report(name, fro_norm(lhs - rhs), scale, note=note)

    def skip(self, name, note):
        return ResidualReport(
            identity=name, residual=math.nan, scale=math.nan, ratio=math.nan,
            tolerance=self.tol[name], status="skip", regime=self.regime,
            asserted=self.regime != "general", note=note,
        )

    def compare_det(self, name, sign, log_abs, matrix):
        """Formula ``sign * exp(log_abs)`` against LU of ``matrix``.

        A zero formula value is checked by the smallest pivot instead.
        """
        f = lu_decompose(matrix)
        if sign == 0:
            return self.report(
                name, f.min_pivot(), max(f.scale, 1e-300), tol_key="singular_pivot",
                note="formula gives 0; smallest LU pivot relative to max|entry|",
                detail={"min_pivot": f.min_pivot()},
            )
        o_sign, o_log = f.slogdet()
        detail = {"formula_sign": sign, "formula_log_abs": log_abs, "oracle_sign": o_sign, "oracle_log_abs": o_log}
        if o_sign == 0:
            return self.report(name, 1.0, 1.0, note="LU found an exact zero pivot", detail=detail)
        d = abs(log_abs - o_log)
        # |f - o| / max(|f|, |o|) evaluated from the logs
        ratio = -math.expm1(-d) if o_sign == sign else 1.0 + math.exp(-d)
        big = max(log_abs, o_log)
        scale = math.exp(big) if big < 709.0 else math.inf
        if math.isinf(scale):
            return self.report(name, ratio, 1.0, note="magnitudes beyond float64; ratio from logs", detail=detail)
        return self.report(name, ratio * scale, scale, detail=detail)


def _laplacian_factorization(ctx):
    m = ctx.m
    f_inv = lu_inverse(m.F, cond_limit=None)
    return ctx.compare("laplacian_factorization", m.L, m.QI @ f_inv @ m.QI.T)


def _orientation_det(ctx):
    s = ctx.t.s
    tau = ctx.prof.tau
    if np.any(tau == 0):
        sign, log_abs = 0, -math.inf
    else:
        sign = int(np.prod(np.sign(tau))) ** s
        log_abs = s * ((ctx.t.n - 2) * math.log(2.0) + float(np.sum(np.log(np.abs(tau)))))
    return ctx.compare_det("orientation_det", sign, log_abs, ctx.m.HI)


def _orientation_inverse(ctx):
    if ctx.prof.deg2_vertices:
        return ctx.skip("orientation_inverse", "tree has a degree-2 vertex")
    m = ctx.m
    return ctx.compare("orientation_inverse", lu_inverse(m.HI, cond_limit=None), 0.5 * m.QI.T @ m.tau_hat_kron @ m.QI)


def _laplacian_distance(ctx):
    """``L D = tau 1' x I - 2I`` and ``D L = 1 tau' x I - 2I``, stacked."""
    t, m = ctx.t, ctx.m
    n, s = t.n, t.s
    tau = ctx.prof.tau.astype(np.float64)
    ones = np.ones(n)
    eye = np.eye(n * s)
    rhs1 = kron(np.outer(tau, ones), np.eye(s)) - 2.0 * eye
    rhs2 = kron(np.outer(ones, tau), np.eye(s)) - 2.0 * eye
    return ctx.compare("laplacian_distance", np.vstack([m.L @ m.D, m.D @ m.L]), np.vstack([rhs1, rhs2]))


def _squared_distance_tau(ctx):
    m = ctx.m
    return ctx.compare("squared_distance_tau", m.Delta @ m.tau_kron, m.D @ m.delta_hat)


def _incidence_congruence(ctx):
    m = ctx.m
    return ctx.compare("incidence_congruence", m.QI.T @ m.Delta @ m.QI, -2.0 * m.F @ m.HI @ m.F)


def _squared_distance_laplacian(ctx):
    m = ctx.m
    rhs = 2.0 * m.D @ m.tau_tilde_kron - kron(np.ones((ctx.t.n, 1)), m.delta_hat.T)
    return ctx.compare("squared_distance_laplacian", m.Delta @ m.L, rhs)


def _squared_distance_eta(ctx):
    if ctx.prof.deg2_vertices:
        return ctx.skip("squared_distance_eta", "tree has a degree-2 vertex")
    m = ctx.m
    b = beta(ctx.t, m)
    return ctx.compare("squared_distance_eta", m.Delta @ eta(ctx.t, m), kron(np.ones((ctx.t.n, 1)), b))


def _det_vs_oracle(ctx):
    r = det_formula(ctx.t)
    rep = ctx.compare_det("det_vs_oracle", r.sign, r.log_abs, ctx.m.Delta)
    rep.detail["branch"] = r.branch.value
    rep.detail["formula_value"] = r.value
    return rep


def _inverse_vs_oracle(ctx):
    if ctx.prof.deg2_vertices:
        return ctx.skip("inverse_vs_oracle", "tree has a degree-2 vertex")
    try:
        res = inverse_formula(ctx.t, ctx.m)
    except BetaSingular as exc:
        return ctx.skip("inverse_vs_oracle", f"beta singular: {exc}")
    try:
        oracle, cond = lu_inverse(ctx.m.Delta, cond_limit=None, return_cond=True)
    except Singular as exc:
        return ctx.report("inverse_vs_oracle", math.inf, 1.0, note=f"LU oracle: {exc}")
    rep = ctx.compare("inverse_vs_oracle", res.delta_inv, oracle)
    rep.detail["cond"] = cond
    rep.detail["rel_to_oracle"] = fro_norm(res.delta_inv - oracle) / max(fro_norm(oracle), 1e-300)
    return rep


_CHECKS = (
    _laplacian_factorization,
    _orientation_det,
    _orientation_inverse,
    _laplacian_distance,
    _squared_distance_tau,
    _incidence_congruence,
    _squared_distance_laplacian,
    _squared_distance_eta,
    _det_vs_oracle,
    _inverse_vs_oracle,
)


def _public(fn):
    def check(t, mats=None, tolerances=None):
        return fn(_Ctx(t, mats, tolerances))

    check.__name__ = check.__qualname__ = "check" + fn.__name__
    check.__doc__ = fn.__doc__
    return check


check_laplacian_factorization = _public(_laplacian_factorization)
check_orientation_det = _public(_orientation_det)
check_orientation_inverse = _public(_orientation_inverse)
check_laplacian_distance = _public(_laplacian_distance)
check_squared_distance_tau = _public(_squared_distance_tau)
check_incidence_congruence = _public(_incidence_congruence)
check_squared_distance_laplacian = _public(_squared_distance_laplacian)
check_squared_distance_eta = _public(_squared_distance_eta)
check_det_vs_oracle = _public(_det_vs_oracle)
check_inverse_vs_oracle = _public(_inverse_vs_oracle)


def run_all(t, mats=None, tolerances=None):
    """Every check, in the fixed order of :data:`IDENTITIES`."""
    ctx = _Ctx(t, mats, tolerances)
    return [chk(ctx) for chk in _CHECKS]
