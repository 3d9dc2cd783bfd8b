"""Matrix-weighted trees: validation, paths, degrees.

Vertex labels are 1-based on input to :func:`validate` (matching tree files)
and 0-based on every object it returns.
"""
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadLabels, BadWeightShape, NotATree, NotPositiveDefinite, VertexOutOfRange

PD_TOL = 1e-10
SYM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Edge:
    tail: int
    head: int
    weight: np.ndarray


@dataclass(frozen=True, eq=False)
class DegreeProfile:
    delta: np.ndarray
    tau: np.ndarray
    deg2_vertices: tuple

    @property
    def branch(self):
        k = len(self.deg2_vertices)
        return "NoDeg2" if k == 0 else "OneDeg2" if k == 1 else "TwoPlusDeg2"


class WeightedTree:
    """A validated tree on ``n`` vertices with ``s x s`` SPD edge weights.

    Build instances with :func:`validate`; the constructor does not check
    anything.  Edge ``k`` is the k-th edge of input order, oriented tail->head.
    """

    def __init__(self, n, s, edges):
        self.n = n
        self.s = s
        self.edges = tuple(edges)

    def __repr__(self):
        return f"WeightedTree(n={self.n}, s={self.s}, edges={[(e.tail + 1, e.head + 1) for e in self.edges]})"

    def __eq__(self, other):
        if not isinstance(other, WeightedTree):
            return NotImplemented
        return (
            self.n == other.n
            and self.s == other.s
            and len(self.edges) == len(other.edges)
            and all(
                a.tail == b.tail and a.head == b.head and np.array_equal(a.weight, b.weight)
                for a, b in zip(self.edges, other.edges)
            )
        )

    __hash__ = None

    @property
    def weights(self):
        """Stacked edge weights, shape ``(n-1, s, s)``."""
        return self._weights

    @cached_property
    def _weights(self):
        w = np.stack([e.weight for e in self.edges]) if self.edges else np.zeros((0, self.s, self.s))
        w.flags.writeable = False
        return w

    @cached_property
    def adjacency(self):
        """``adjacency[v]`` lists ``(neighbour, edge_index)`` pairs."""
        adj = [[] for _ in range(self.n)]
        for k, e in enumerate(self.edges):
            adj[e.tail].append((e.head, k))
            adj[e.head].append((e.tail, k))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def hop_distances(self):
        """Unweighted all-pairs distances, one BFS per vertex."""
        n = self.n
        dist = np.full((n, n), -1, dtype=np.int64)
        for root in range(n):
            dist[root, root] = 0
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y, _ in self.adjacency[x]:
                    if dist[root, y] < 0:
                        dist[root, y] = dist[root, x] + 1
                        queue.append(y)
        dist.flags.writeable = False
        return dist

    @cached_property
    def edge_sides(self):
        """``sides[k, v] = 1`` iff v is on the head side of edge k."""
        d = self.hop_distances
        sides = np.zeros((len(self.edges), self.n), dtype=np.int8)
        for k, e in enumerate(self.edges):
            sides[k] = d[e.head] < d[e.tail]
        sides.flags.writeable = False
        return sides

    def with_flipped_edges(self, which=None):
        """Same tree with the edges in ``which`` (default: all) reversed."""
        which = set(range(len(self.edges)) if which is None else which)
        return WeightedTree(self.n, self.s, [
            Edge(e.head, e.tail, e.weight) if k in which else e for k, e in enumerate(self.edges)
        ])


def _check_weight(k, w, s):
    arr = np.asarray(w, dtype=np.float64)
    if arr.ndim == 0 and s == 1:
        arr = arr.reshape(1, 1)
    if arr.shape != (s, s):
        raise BadWeightShape(f"weight of edge {k + 1} has shape {arr.shape}, expected ({s}, {s})")
    if not np.all(np.isfinite(arr)):
        raise NotPositiveDefinite(k, "non-finite entries")
    scale = max(1.0, float(np.max(np.abs(arr))))
    if np.max(np.abs(arr - arr.T)) > SYM_TOL * scale:
        raise NotPositiveDefinite(k, "not symmetric")
    arr = (arr + arr.T) / 2.0
    lam_min = float(np.linalg.eigvalsh(arr)[0])
    if not lam_min > PD_TOL * scale:
        raise NotPositiveDefinite(k, f"smallest eigenvalue {lam_min:.6g}")
    arr.flags.writeable = False
    return arr


def validate(n, edges, s=None):
    """Check raw input and return a :class:`WeightedTree`.

    ``edges`` is a sequence of ``(u, v, w)`` with 1-based labels ``u -> v`` and
    ``w`` an ``s x s`` array.  ``s`` defaults to the order of the first weight.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
        raise NotATree(f"need an integer vertex count n >= 2, got {n!r}")
    n = int(n)
    edges = list(edges)
    if len(edges) != n - 1:
        raise NotATree(f"a tree on {n} vertices has {n - 1} edges, got {len(edges)}")
    if s is None:
        s = np.atleast_2d(np.asarray(edges[0][2])).shape[0]
    if s < 1:
        raise BadWeightShape(f"weight order must be >= 1, got {s}")

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = []
    for k, (u, v, w) in enumerate(edges):
        for lab in (u, v):
            if not isinstance(lab, (int, np.integer)) or isinstance(lab, bool) or not 1 <= lab <= n:
                raise BadLabels(f"edge {k + 1}: vertex label {lab!r} not in 1..{n}")
        if u == v:
            raise NotATree(f"edge {k + 1} is a loop at vertex {u}")
        ru, rv = find(u - 1), find(v - 1)
        if ru == rv:
            raise NotATree(f"edge {k + 1} ({u}-{v}) closes a cycle")
        parent[ru] = rv
        out.append(Edge(int(u) - 1, int(v) - 1, _check_weight(k, w, s)))
    # n-1 edges without a cycle always connect n vertices
    return WeightedTree(n, int(s), out)


def _check_vertex(t, v):
    if not 0 <= v < t.n:
        raise VertexOutOfRange(f"vertex {v + 1} not in 1..{t.n}")


def tree_path(t, i, j):
    """Edge indices along the unique path from vertex ``i`` to ``j`` (0-based)."""
    _check_vertex(t, i)
    _check_vertex(t, j)
    d = t.hop_distances
    path = []
    x = i
    while x != j:
        for y, k in t.adjacency[x]:
            if d[y, j] < d[x, j]:
                path.append(k)
                x = y
                break
    return path


def degree_profile(t):
    delta = np.array([len(a) for a in t.adjacency], dtype=np.int64)
    tau = 2 - delta
    deg2 = tuple(int(v) for v in np.flatnonzero(delta == 2))
    delta.flags.writeable = False
    tau.flags.writeable = False
    return DegreeProfile(delta=delta, tau=tau, deg2_vertices=deg2)


def classify_weights(t, tol=1e-12):
    """``'diagonal'``, ``'commuting'`` or ``'general'`` for the edge weight family."""
    w = t.weights
    if all(np.count_nonzero(x - np.diag(np.diag(x))) == 0 for x in w):
        return "diagonal"
    scale = max(1.0, float(np.max(np.abs(w)))) ** 2
    for a in range(len(w)):
        for b in range(a + 1, len(w)):
            if np.max(np.abs(w[a] @ w[b] - w[b] @ w[a])) > tol * scale:
                return "general"
    return "commuting"
