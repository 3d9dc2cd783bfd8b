"""Dense real matrix helpers built on the LU kernel.

Matrices are plain 2-D ``float64`` numpy arrays.  Determinants are carried as
``(sign, log|det|)`` internally and only turned into a float at the edge.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import IllConditioned, NonFinite, NonSquare, ShapeMismatch, Singular

PIVOT_TOL = 1e-12
COND_LIMIT = 1e12


def as_dense(a, name="matrix"):
    """Coerce to a finite 2-D float64 array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or Inf")
    return arr


def _square(a):
    a = as_dense(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got {a.shape[0]}x{a.shape[1]}")
    return a


def fro_norm(a):
    return float(np.sqrt(np.sum(np.square(a))))


def max_abs(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def kron(a, b):
    return kernels.kron_kernel(as_dense(a), as_dense(b))


@dataclass(frozen=True)
class BlockIndex:
    """Addressing of an ``n x n`` grid of ``s x s`` blocks (0-based)."""

    block_size: int
    block_count: int

    @property
    def dim(self):
        return self.block_size * self.block_count

    def span(self, i):
        s = self.block_size
        return slice(i * s, (i + 1) * s)

    def offset(self, i, j, r, c):
        if not (0 <= i < self.block_count and 0 <= j < self.block_count):
            raise IndexError(f"block ({i}, {j}) outside {self.block_count}x{self.block_count}")
        if not (0 <= r < self.block_size and 0 <= c < self.block_size):
            raise IndexError(f"entry ({r}, {c}) outside block of size {self.block_size}")
        s = self.block_size
        return i * s + r, j * s + c


def assemble_blocks(idx, provider):
    """Build the ``ns x ns`` matrix whose block ``(i, j)`` is ``provider(i, j)``."""
    s = idx.block_size
    out = np.zeros((idx.dim, idx.dim))
    for i in range(idx.block_count):
        for j in range(idx.block_count):
            blk = np.asarray(provider(i, j), dtype=np.float64)
            if blk.shape != (s, s):
                raise ShapeMismatch(f"block ({i}, {j}) has shape {blk.shape}, expected ({s}, {s})")
            out[idx.span(i), idx.span(j)] = blk
    return out


def blocks_to_dense(blocks):
    """``(n, m, s, t)`` block array -> ``(n*s, m*t)`` matrix."""
    n, m, s, t = blocks.shape
    return np.ascontiguousarray(blocks.transpose(0, 2, 1, 3)).reshape(n * s, m * t)


def dense_to_blocks(a, s):
    rows, cols = a.shape
    return a.reshape(rows // s, s, cols // s, s).transpose(0, 2, 1, 3)


@dataclass(frozen=True)
class LUFactor:
    """``P A = L U`` with unit-lower ``L`` and ``U`` packed into ``lu``."""

    lu: np.ndarray
    perm: np.ndarray
    swaps: int
    scale: float  # max |a_ij| of the factored matrix

    @property
    def pivots(self):
        return np.diag(self.lu).copy()

    def min_pivot(self):
        p = np.abs(self.pivots)
        return float(p.min()) if p.size else math.inf

    def pivot_ratio(self):
        """Smallest |pivot| relative to ``max(1e-300, scale)``."""
        return self.min_pivot() / max(self.scale, 1e-300)

    def is_singular(self, tol=PIVOT_TOL):
        return self.min_pivot() <= tol * self.scale

    def slogdet(self):
        piv = self.pivots
        if np.any(piv == 0.0):
            return 0, -math.inf
        sign = -1 if self.swaps % 2 else 1
        if np.count_nonzero(piv < 0) % 2:
            sign = -sign
        return sign, float(np.sum(np.log(np.abs(piv))))


def lu_decompose(a):
    a = _square(a)
    lu, perm, swaps = kernels.lu_factor(np.ascontiguousarray(a))
    return LUFactor(lu=lu, perm=perm, swaps=int(swaps), scale=max_abs(a))


def signed_exp(sign, logabs):
    """Return ``(value, overflowed)`` for ``sign * exp(logabs)``; saturates to inf."""
    if sign == 0:
        return 0.0, False
    if logabs > 709.78:
        return math.copysign(math.inf, sign), True
    return sign * math.exp(logabs), False


def lu_slogdet(a):
    return lu_decompose(a).slogdet()


def lu_det(a):
    """Determinant by partially pivoted LU.  Saturates to +-inf on overflow."""
    f = lu_decompose(a)
    # plain product first: keeps small integer determinants exact
    val = float(np.prod(f.pivots)) * (-1.0 if f.swaps % 2 else 1.0)
    if math.isfinite(val):
        return val
    value, overflowed = signed_exp(*f.slogdet())
    if overflowed:
        warnings.warn("determinant overflowed float64; saturated to inf", RuntimeWarning, stacklevel=2)
    return value


def lu_solve(factor, b):
    b = as_dense(b)
    if b.shape[0] != factor.lu.shape[0]:
        raise ShapeMismatch(f"right-hand side has {b.shape[0]} rows, expected {factor.lu.shape[0]}")
    return kernels.lu_solve(factor.lu, factor.perm, np.ascontiguousarray(b))


def one_norm(a):
    return float(np.max(np.sum(np.abs(a), axis=0))) if np.size(a) else 0.0


def lu_inverse(a, cond_limit=COND_LIMIT, return_cond=False):
    """Inverse through LU.

    Raises :class:`Singular` when a pivot falls below ``PIVOT_TOL * max|a|`` and
    :class:`IllConditioned` when the 1-norm condition number exceeds
    ``cond_limit``.
    """
    a = _square(a)
    f = lu_decompose(a)
    if f.is_singular():
        raise Singular(f"pivot {f.min_pivot():.3e} below {PIVOT_TOL:.0e} * max|a| = {PIVOT_TOL * f.scale:.3e}")
    x = lu_solve(f, np.eye(a.shape[0]))
    cond = one_norm(a) * one_norm(x)
    if cond_limit is not None and cond > cond_limit:
        raise IllConditioned(cond, cond_limit)
    return (x, cond) if return_cond else x


def schur_det(a11, a12, a21, a22):
    """``det [[a11, a12], [a21, a22]] = det(a11) det(a22 - a21 a11^-1 a12)``."""
    a11, a22 = _square(a11), _square(a22)
    a12, a21 = as_dense(a12), as_dense(a21)
    k, m = a11.shape[0], a22.shape[0]
    if a12.shape != (k, m) or a21.shape != (m, k):
        raise ShapeMismatch(
            f"blocks not conformable: a11 {a11.shape}, a12 {a12.shape}, a21 {a21.shape}, a22 {a22.shape}"
        )
    f = lu_decompose(a11)
    if f.is_singular():
        raise Singular("leading block a11 is singular")
    comp = a22 - a21 @ lu_solve(f, a12)
    s1, l1 = f.slogdet()
    s2, l2 = lu_slogdet(comp)
    value, _ = signed_exp(s1 * s2, l1 + l2)
    return value
