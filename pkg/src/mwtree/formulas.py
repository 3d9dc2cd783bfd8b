"""Closed forms for det(Delta), beta, eta and the inverse of Delta.

The determinant is split into named factors, each held as ``(sign, log|.|)``
alongside its float value, so large trees can be compared in log space.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import BetaSingular, Degree2Present, Singular
from .linalg import lu_decompose, lu_det, lu_inverse, signed_exp
from .matrices import TreeMatrices, build
from .tree import WeightedTree, degree_profile


class Branch(str, Enum):
    NO_DEG2 = "NoDeg2"
    ONE_DEG2 = "OneDeg2"
    TWO_PLUS_DEG2 = "TwoPlusDeg2"


def branch_for(profile):
    return Branch(profile.branch)


@dataclass(frozen=True)
class Factor:
    name: str
    label: str
    sign: int
    log_abs: float
    value: float


@dataclass(frozen=True)
class DetResult:
    branch: Branch
    sign: int
    log_abs: float
    value: float
    overflow: bool
    factors: tuple

    def breakdown(self):
        """e.g. ``'(-1)^6 * 2^6 * 1 * 16 * 100'``."""
        return " * ".join(f.label for f in self.factors)


def _fmt(x):
    if math.isfinite(x) and x == round(x) and abs(x) < 2.0 ** 53:
        return str(int(round(x)))
    return f"{x:.12g}"


def _factor(name, value, sign=None, log_abs=None, label=None):
    if sign is None:
        sign = 0 if value == 0 else (1 if value > 0 else -1)
    if log_abs is None:
        log_abs = math.log(abs(value)) if value != 0 else -math.inf
    return Factor(name, label if label is not None else _fmt(value), int(sign), float(log_abs), float(value))


def _slog(a):
    return lu_decompose(a).slogdet()


def _pow2(p):
    try:
        v = math.ldexp(1.0, p)
    except OverflowError:
        v = math.inf
    return _factor("power_of_two", v, 1, p * math.log(2.0), f"2^{p}")


def _tau_product(tau, s, skip=None):
    prod = 1
    log_abs = 0.0
    for k, tk in enumerate(tau):
        if k == skip:
            continue
        prod *= int(tk) ** s
        log_abs += s * math.log(abs(int(tk)))
    sign = 1 if prod > 0 else -1
    try:
        value = float(prod)
    except OverflowError:
        value = math.copysign(math.inf, sign)
    return _factor("tau_product", value, sign, log_abs)


def _weight_square_product(t):
    value = 1.0
    log_abs = 0.0
    for w in t.weights:
        _, la = _slog(w)
        log_abs += 2.0 * la
        value *= lu_det(w) ** 2
    return _factor("weight_square_dets", value, 1, log_abs)


def det_formula(t: WeightedTree) -> DetResult:
    """det(Delta) from degrees, weights and tau; no ns x ns factorisation."""
    prof = degree_profile(t)
    branch = branch_for(prof)
    n, s = t.n, t.s
    if branch is Branch.TWO_PLUS_DEG2:
        f = _factor("degree2_vertices", 0.0, 0, -math.inf, "0")
        return DetResult(branch, 0, -math.inf, 0.0, False, (f,))

    e = (n - 1) * s
    factors = [
        _factor("sign", float((-1) ** e), (-1) ** e, 0.0, f"(-1)^{e}"),
        _pow2((2 * n - 5) * s),
    ]
    if branch is Branch.NO_DEG2:
        b = beta(t)
        bs, bl = _slog(b)
        factors += [
            _tau_product(prof.tau, s),
            _weight_square_product(t),
            _factor("det_beta", lu_det(b), bs, bl),
        ]
    else:
        v = prof.deg2_vertices[0]
        (_, ki), (_, kj) = t.adjacency[v]
        pair = t.edges[ki].weight + t.edges[kj].weight
        _, pl = _slog(pair)
        factors += [
            _factor(f"det(W{ki + 1}+W{kj + 1})^2", lu_det(pair) ** 2, 1, 2.0 * pl),
            _weight_square_product(t),
            _tau_product(prof.tau, s, skip=v),
        ]

    sign = 1
    log_abs = 0.0
    value = 1.0
    for f in factors:
        sign *= f.sign
        log_abs += f.log_abs
        value *= f.value
    overflow = False
    if sign == 0:
        value, log_abs = 0.0, -math.inf
    elif not math.isfinite(value):
        value, overflow = signed_exp(sign, log_abs)
    return DetResult(branch, sign, log_abs, value, overflow, tuple(factors))


def _require_no_deg2(t):
    prof = degree_profile(t)
    if prof.deg2_vertices:
        raise Degree2Present(prof.deg2_vertices)
    return prof


def beta(t: WeightedTree, mats: Optional[TreeMatrices] = None) -> np.ndarray:
    """Sum over vertices of ``delta_hat_i @ delta_hat_i / tau_i``, in vertex order."""
    prof = _require_no_deg2(t)
    s = t.s
    dh = mats.delta_hat if mats is not None else build(t).delta_hat
    out = np.zeros((s, s))
    for i, ti in enumerate(prof.tau):
        blk = dh[i * s:(i + 1) * s]
        out += (blk @ blk) * (1.0 / float(ti))
    return out


def eta(t: WeightedTree, mats: Optional[TreeMatrices] = None) -> np.ndarray:
    _require_no_deg2(t)
    m = mats if mats is not None else build(t)
    return 2.0 * m.tau_kron - m.L @ (m.tau_hat_kron @ m.delta_hat)


@dataclass(frozen=True, eq=False)
class InverseResult:
    beta: np.ndarray
    eta: np.ndarray
    delta_inv: np.ndarray
    l_tauhat_l: np.ndarray       # L (tau_hat x I) L
    eta_binv_eta: np.ndarray     # eta beta^-1 eta'


def inverse_formula(t: WeightedTree, mats: Optional[TreeMatrices] = None) -> InverseResult:
    """Delta^-1 = -1/4 L (tau_hat x I) L + 1/4 eta beta^-1 eta'."""
    _require_no_deg2(t)
    m = mats if mats is not None else build(t)
    b = beta(t, m)
    if lu_decompose(b).is_singular():
        raise BetaSingular(f"beta is singular (det {lu_det(b):.3e})")
    try:
        b_inv = lu_inverse(b, cond_limit=None)
    except Singular as exc:
        raise BetaSingular(str(exc)) from exc
    h = eta(t, m)
    ltl = m.L @ m.tau_hat_kron @ m.L
    ebe = h @ b_inv @ h.T
    return InverseResult(beta=b, eta=h, delta_inv=-0.25 * ltl + 0.25 * ebe, l_tauhat_l=ltl, eta_binv_eta=ebe)
