"""Seeded random trees and weight families.

Every generator takes either an integer seed or a ``numpy.random.Generator``;
integer seeds always go through the counter-based Philox bit generator so
streams are identical across platforms.
"""
import heapq
from collections import deque

import numpy as np

from .errors import NTooSmall
from .tree import validate

WEIGHT_MODES = ("diagonal", "commuting", "general")
TOPOLOGIES = ("uniform", "no-deg2", "one-deg2", "two-plus-deg2", "path")


def make_rng(seed, *extra):
    if isinstance(seed, np.random.Generator):
        return seed
    key = [int(seed), *map(int, extra)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def orient_from_root(n, pairs, root=0):
    """Orient each undirected pair away from ``root``; keeps the pair order."""
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    depth = [-1] * n
    depth[root] = 0
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if depth[y] < 0:
                depth[y] = depth[x] + 1
                queue.append(y)
    return [(u, v) if depth[u] < depth[v] else (v, u) for u, v in pairs]


def prufer_decode(seq, n):
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    pairs = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        pairs.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    pairs.append((u, v))
    return pairs


def random_tree(n, seed):
    """Uniform labelled tree on ``n`` vertices, edges oriented away from vertex 0."""
    if n < 2:
        raise NTooSmall(f"need n >= 2, got {n}")
    rng = make_rng(seed)
    seq = rng.integers(0, n, size=n - 2).tolist()
    return orient_from_root(n, prufer_decode(seq, n))


def _relabel(n, pairs, rng):
    perm = rng.permutation(n)
    pairs = [(int(perm[u]), int(perm[v])) for u, v in pairs]
    order = rng.permutation(len(pairs))
    return orient_from_root(n, [pairs[i] for i in order])


def _no_deg2_pairs(n, rng):
    if n == 2:
        return [(0, 1)]
    if n == 3:
        raise NTooSmall("every tree on 3 vertices has a degree-2 vertex")
    pairs = [(0, 1), (0, 2), (0, 3)]
    degree = [3, 1, 1, 1]
    while len(degree) < n:
        room = n - len(degree)
        leaves = [v for v, d in enumerate(degree) if d == 1]
        if room >= 2 and rng.random() < 0.5:
            # a leaf grows two children and becomes degree 3
            v = leaves[int(rng.integers(len(leaves)))]
            for _ in range(2):
                pairs.append((v, len(degree)))
                degree.append(1)
            degree[v] = 3
        else:
            inner = [v for v, d in enumerate(degree) if d >= 3]
            v = inner[int(rng.integers(len(inner)))]
            pairs.append((v, len(degree)))
            degree.append(1)
            degree[v] += 1
    return pairs


def no_deg2_tree(n, seed):
    """Random tree with no vertex of degree 2 (n = 2 or n >= 4); not uniform."""
    rng = make_rng(seed)
    return _relabel(n, _no_deg2_pairs(n, rng), rng)


def one_deg2_tree(n, seed):
    """Random tree with exactly one degree-2 vertex (n = 3 or n >= 5)."""
    if n == 4 or n < 3:
        raise NTooSmall(f"no tree on {n} vertices has exactly one degree-2 vertex")
    rng = make_rng(seed)
    pairs = _no_deg2_pairs(n - 1, rng)
    k = int(rng.integers(len(pairs)))
    u, v = pairs[k]
    mid = n - 1
    pairs[k:k + 1] = [(u, mid), (mid, v)]
    return _relabel(n, pairs, rng)


def path_tree(n, seed):
    rng = make_rng(seed)
    if n < 2:
        raise NTooSmall(f"need n >= 2, got {n}")
    return _relabel(n, [(i, i + 1) for i in range(n - 1)], rng)


def two_plus_deg2_tree(n, seed, max_tries=200):
    """Uniform tree conditioned on at least two degree-2 vertices (n >= 4)."""
    if n < 4:
        raise NTooSmall(f"need n >= 4 for two degree-2 vertices, got {n}")
    rng = make_rng(seed)
    for _ in range(max_tries):
        pairs = random_tree(n, rng)
        deg = np.bincount(np.array(pairs).ravel(), minlength=n)
        if np.count_nonzero(deg == 2) >= 2:
            return pairs
    return path_tree(n, rng)


_TOPOLOGY_FNS = {
    "uniform": random_tree,
    "no-deg2": no_deg2_tree,
    "one-deg2": one_deg2_tree,
    "two-plus-deg2": two_plus_deg2_tree,
    "path": path_tree,
}


def topology_allows(topology, n):
    if topology == "no-deg2":
        return n == 2 or n >= 4
    if topology == "one-deg2":
        return n == 3 or n >= 5
    if topology == "two-plus-deg2":
        return n >= 4
    return n >= 2


def random_topology(topology, n, seed):
    try:
        fn = _TOPOLOGY_FNS[topology]
    except KeyError:
        raise ValueError(f"unknown topology {topology!r}; choose from {TOPOLOGIES}") from None
    return fn(n, seed)


def random_weights(m, s, mode, seed):
    """``m`` random ``s x s`` positive definite weights.

    diagonal:  diagonal entries uniform on [0.5, 4].
    commuting: quadratic polynomials in one shared random symmetric matrix,
               shifted so the smallest eigenvalue is at least 0.5.
    general:   ``G'G + 0.1 s I`` with Gaussian ``G``.
    """
    rng = make_rng(seed)
    out = []
    if mode == "diagonal":
        for _ in range(m):
            out.append(np.diag(rng.uniform(0.5, 4.0, size=s)))
    elif mode == "commuting":
        a = rng.standard_normal((s, s))
        base = 0.5 * (a + a.T)
        base_sq = base @ base
        eye = np.eye(s)
        for _ in range(m):
            c0, c1, c2 = rng.uniform(0.5, 4.0), rng.uniform(-1.0, 1.0), rng.uniform(0.0, 1.0)
            w = c0 * eye + c1 * base + c2 * base_sq
            w = 0.5 * (w + w.T)
            lam_min = float(np.linalg.eigvalsh(w)[0])
            if lam_min < 0.5:
                w = w + (0.5 - lam_min) * eye
            out.append(w)
    elif mode == "general":
        for _ in range(m):
            g = rng.standard_normal((s, s))
            w = g.T @ g + 0.1 * s * np.eye(s)
            out.append(0.5 * (w + w.T))
    else:
        raise ValueError(f"unknown weight mode {mode!r}; choose from {WEIGHT_MODES}")
    return out


def random_instance(n, s, mode, seed, topology="uniform"):
    """Random validated tree: topology first, then weights, from one stream."""
    rng = make_rng(seed)
    pairs = random_topology(topology, n, rng)
    weights = random_weights(len(pairs), s, mode, rng)
    return validate(n, [(u + 1, v + 1, w) for (u, v), w in zip(pairs, weights)], s=s)
