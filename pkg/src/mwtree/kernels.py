"""Inner-loop kernels, each in two flavours.

``*_loops`` are written as explicit loops and compiled by numba when it is
enabled; ``*_numpy`` are vectorised equivalents used as the fallback.  The
un-suffixed names are bound to whichever backend is active.
"""
import numpy as np

from ._accel import NUMBA_AVAILABLE, njit


# --- LU with partial pivoting ------------------------------------------------

@njit
def lu_factor_loops(a):
    n = a.shape[0]
    lu = a.copy()
    perm = np.arange(n)
    swaps = 0
    for k in range(n):
        p = k
        best = abs(lu[k, k])
        for i in range(k + 1, n):
            v = abs(lu[i, k])
            if v > best:
                best = v
                p = i
        if p != k:
            for j in range(n):
                tmp = lu[k, j]
                lu[k, j] = lu[p, j]
                lu[p, j] = tmp
            t = perm[k]
            perm[k] = perm[p]
            perm[p] = t
            swaps += 1
        piv = lu[k, k]
        if piv == 0.0:
            continue
        for i in range(k + 1, n):
            f = lu[i, k] / piv
            lu[i, k] = f
            if f != 0.0:
                for j in range(k + 1, n):
                    lu[i, j] -= f * lu[k, j]
    return lu, perm, swaps


def lu_factor_numpy(a):
    n = a.shape[0]
    lu = np.array(a, dtype=np.float64, copy=True)
    perm = np.arange(n)
    swaps = 0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            swaps += 1
        piv = lu[k, k]
        if piv == 0.0:
            continue
        lu[k + 1:, k] /= piv
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, swaps


@njit
def lu_solve_loops(lu, perm, b):
    n = lu.shape[0]
    m = b.shape[1]
    x = np.empty((n, m))
    for i in range(n):
        for c in range(m):
            x[i, c] = b[perm[i], c]
    for i in range(n):
        for j in range(i):
            f = lu[i, j]
            if f != 0.0:
                for c in range(m):
                    x[i, c] -= f * x[j, c]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            f = lu[i, j]
            if f != 0.0:
                for c in range(m):
                    x[i, c] -= f * x[j, c]
        d = lu[i, i]
        for c in range(m):
            x[i, c] /= d
    return x


def lu_solve_numpy(lu, perm, b):
    n = lu.shape[0]
    x = np.array(b[perm], dtype=np.float64)
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] -= lu[i, i + 1:] @ x[i + 1:]
        x[i] /= lu[i, i]
    return x


# --- Kronecker product ------------------------------------------------------

@njit
def kron_loops(a, b):
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m * p, n * q))
    for i in range(m):
        for j in range(n):
            aij = a[i, j]
            if aij == 0.0:
                continue
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = aij * b[k, l]
    return out


def kron_numpy(a, b):
    m, n = a.shape
    p, q = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(m * p, n * q)


# --- tree block kernels -----------------------------------------------------
# ``side[k, v]`` is 1 when vertex v lies on the head side of edge k once that
# edge is removed; edge k is on the (i, j) path iff side[k, i] != side[k, j].

@njit
def path_block_sums_loops(side, weights):
    m, n = side.shape
    s = weights.shape[1]
    out = np.zeros((n, n, s, s))
    for k in range(m):
        for i in range(n):
            for j in range(i + 1, n):
                if side[k, i] != side[k, j]:
                    for r in range(s):
                        for c in range(s):
                            w = weights[k, r, c]
                            out[i, j, r, c] += w
                            out[j, i, r, c] += w
    return out


def path_block_sums_numpy(side, weights):
    on_path = (side[:, :, None] != side[:, None, :]).astype(np.float64)
    return np.einsum("kij,kab->ijab", on_path, weights)


@njit
def block_square_loops(blocks):
    n1, n2, s, _ = blocks.shape
    out = np.zeros_like(blocks)
    for i in range(n1):
        for j in range(n2):
            for r in range(s):
                for c in range(s):
                    acc = 0.0
                    for t in range(s):
                        acc += blocks[i, j, r, t] * blocks[i, j, t, c]
                    out[i, j, r, c] = acc
    return out


def block_square_numpy(blocks):
    return blocks @ blocks


if NUMBA_AVAILABLE:
    lu_factor = lu_factor_loops
    lu_solve = lu_solve_loops
    kron_kernel = kron_loops
    path_block_sums = path_block_sums_loops
    block_square = block_square_loops
else:
    lu_factor = lu_factor_numpy
    lu_solve = lu_solve_numpy
    kron_kernel = kron_numpy
    path_block_sums = path_block_sums_numpy
    block_square = block_square_numpy
