"""Block matrices attached to a matrix-weighted tree.

All lifted objects are ``ns``-dimensional with vertex ``i`` occupying rows
``i*s : (i+1)*s``.  The incidence and edge-orientation matrices live on the
underlying unweighted tree and are lifted by ``kron(., I_s)``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import Degree2Present
from .linalg import blocks_to_dense, kron, lu_inverse
from .tree import WeightedTree, degree_profile


def distance_blocks(t: WeightedTree) -> np.ndarray:
    """``(n, n, s, s)`` array of path weight sums ``d(i, j)``."""
    return kernels.path_block_sums(np.ascontiguousarray(t.edge_sides), np.ascontiguousarray(t.weights))


def distance_matrix(t: WeightedTree) -> np.ndarray:
    return blocks_to_dense(distance_blocks(t))


def _squared(blocks):
    sq = kernels.block_square(blocks)
    # d(i,j) is symmetric, so its square is too; symmetrise away rounding
    return 0.5 * (sq + sq.transpose(1, 0, 3, 2))


def squared_distance_matrix(t: WeightedTree) -> np.ndarray:
    """Blocks are matrix squares ``d(i, j) @ d(i, j)``, not entrywise squares."""
    return blocks_to_dense(_squared(distance_blocks(t)))


def laplacian(t: WeightedTree) -> np.ndarray:
    n, s = t.n, t.s
    blocks = np.zeros((n, n, s, s))
    for e in t.edges:
        w_inv = lu_inverse(e.weight, cond_limit=None)
        w_inv = 0.5 * (w_inv + w_inv.T)
        blocks[e.tail, e.tail] += w_inv
        blocks[e.head, e.head] += w_inv
        blocks[e.tail, e.head] -= w_inv
        blocks[e.head, e.tail] -= w_inv
    return blocks_to_dense(blocks)


def incidence_unlifted(t: WeightedTree) -> np.ndarray:
    """``n x (n-1)``: +1 where the edge leaves the vertex, -1 where it enters."""
    q = np.zeros((t.n, len(t.edges)))
    for k, e in enumerate(t.edges):
        q[e.tail, k] = 1.0
        q[e.head, k] = -1.0
    return q


def edge_orientation_unlifted(t: WeightedTree) -> np.ndarray:
    """``(n-1) x (n-1)`` +-1 matrix; +1 when hop distances tail-tail and head-head agree."""
    d = t.hop_distances
    tails = np.array([e.tail for e in t.edges], dtype=np.int64)
    heads = np.array([e.head for e in t.edges], dtype=np.int64)
    same = d[np.ix_(tails, tails)] == d[np.ix_(heads, heads)]
    h = np.where(same, 1.0, -1.0)
    np.fill_diagonal(h, 1.0)
    return h


def incidence(t: WeightedTree) -> np.ndarray:
    return kron(incidence_unlifted(t), np.eye(t.s))


def edge_orientation(t: WeightedTree) -> np.ndarray:
    return kron(edge_orientation_unlifted(t), np.eye(t.s))


def weight_blockdiag(t: WeightedTree) -> np.ndarray:
    m, s = len(t.edges), t.s
    f = np.zeros((m * s, m * s))
    for k, e in enumerate(t.edges):
        f[k * s:(k + 1) * s, k * s:(k + 1) * s] = e.weight
    return f


def weighted_degrees(t: WeightedTree) -> np.ndarray:
    """``ns x s`` stack of the per-vertex weight sums."""
    n, s = t.n, t.s
    out = np.zeros((n * s, s))
    for e in t.edges:
        out[e.tail * s:(e.tail + 1) * s] += e.weight
        out[e.head * s:(e.head + 1) * s] += e.weight
    return out


@dataclass(frozen=True, eq=False)
class TauFamily:
    tau_kron: np.ndarray                  # ns x s
    tau_tilde_kron: np.ndarray            # ns x ns
    tau_hat_kron: Optional[np.ndarray]    # ns x ns, None with a degree-2 vertex


def tau_hat_kron(t: WeightedTree) -> np.ndarray:
    prof = degree_profile(t)
    if prof.deg2_vertices:
        raise Degree2Present(prof.deg2_vertices)
    return kron(np.diag(1.0 / prof.tau), np.eye(t.s))


def tau_family(t: WeightedTree) -> TauFamily:
    prof = degree_profile(t)
    tau = prof.tau.astype(np.float64)
    eye = np.eye(t.s)
    hat = None if prof.deg2_vertices else kron(np.diag(1.0 / tau), eye)
    return TauFamily(
        tau_kron=kron(tau.reshape(-1, 1), eye),
        tau_tilde_kron=kron(np.diag(tau), eye),
        tau_hat_kron=hat,
    )


@dataclass(frozen=True, eq=False)
class TreeMatrices:
    D: np.ndarray
    Delta: np.ndarray
    L: np.ndarray
    QI: np.ndarray
    HI: np.ndarray
    F: np.ndarray
    delta_hat: np.ndarray
    tau_kron: np.ndarray
    tau_tilde_kron: np.ndarray
    tau_hat_kron: Optional[np.ndarray]


def build(t: WeightedTree) -> TreeMatrices:
    """Every derived matrix in one go; arrays are made read-only."""
    tf = tau_family(t)
    blocks = distance_blocks(t)
    mats = dict(
        D=blocks_to_dense(blocks),
        Delta=blocks_to_dense(_squared(blocks)),
        L=laplacian(t),
        QI=incidence(t),
        HI=edge_orientation(t),
        F=weight_blockdiag(t),
        delta_hat=weighted_degrees(t),
        tau_kron=tf.tau_kron,
        tau_tilde_kron=tf.tau_tilde_kron,
        tau_hat_kron=tf.tau_hat_kron,
    )
    for v in mats.values():
        if v is not None:
            v.flags.writeable = False
    return TreeMatrices(**mats)
