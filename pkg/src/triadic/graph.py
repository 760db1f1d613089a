"""Simple undirected graphs on a dense 0/1 adjacency matrix, plus the
classical metrics used throughout the package (triangles, open triads,
clustering, shortest-path lengths).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

Pair = tuple[int, int]

PATH_NORMALIZATIONS = ("standard", "paper-2m")


class GraphError(ValueError):
    """Raised for malformed graph input or a violated graph precondition."""


class DisconnectedGraphError(GraphError):
    pass


def sorted_pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph.

    ``adjacency`` is a symmetric, hollow ``int8`` matrix. ``labels`` maps the
    internal ids ``0..n-1`` back to the labels seen at ingestion.
    """

    adjacency: np.ndarray
    labels: tuple = ()
    duplicates: int = 0
    self_loops: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        A = self.adjacency
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise GraphError("adjacency must be square")
        if not np.array_equal(A, A.T):
            raise GraphError("adjacency must be symmetric")
        if np.any(np.diag(A) != 0):
            raise GraphError("adjacency must be hollow")
        if not np.all((A == 0) | (A == 1)):
            raise GraphError("adjacency entries must be 0 or 1")
        A.setflags(write=False)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(A.shape[0])))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edge_list: Iterable[Sequence[int]],
        *,
        self_loops: str = "error",
        labels: Sequence | None = None,
    ) -> "Graph":
        """Build a graph on nodes ``0..n-1``.

        Duplicate edges are collapsed and counted in ``duplicates``.
        ``self_loops`` is ``"error"`` (reject) or ``"skip"``.
        """
        if self_loops not in ("error", "skip"):
            raise ValueError(f"unknown self_loops policy {self_loops!r}")
        n = int(n)
        if n < 1:
            raise GraphError("graph needs at least one node")
        A = np.zeros((n, n), dtype=np.int8)
        dup = loops = 0
        for e in edge_list:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"node id out of range [0, {n}): ({u}, {v})")
            if u == v:
                if self_loops == "error":
                    raise GraphError(f"self-loop at node {u}")
                loops += 1
                continue
            if A[u, v]:
                dup += 1
                continue
            A[u, v] = A[v, u] = 1
        return cls(A, tuple(labels) if labels is not None else (), dup, loops)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def m(self) -> int:
        return int(self.adjacency.sum()) // 2

    @property
    def A(self) -> np.ndarray:
        """Adjacency as float64 (cached)."""
        if "A" not in self._cache:
            self._cache["A"] = self.adjacency.astype(np.float64)
        return self._cache["A"]

    @property
    def A2(self) -> np.ndarray:
        """Integer matrix of length-2 walk counts."""
        if "A2" not in self._cache:
            Ai = self.adjacency.astype(np.int64)
            self._cache["A2"] = Ai @ Ai
        return self._cache["A2"]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1, dtype=np.int64)

    @property
    def edges(self) -> list[Pair]:
        us, vs = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def neighbors(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[u])

    def with_edges(self, add: Iterable[Pair] = (), remove: Iterable[Pair] = ()) -> "Graph":
        """Return a copy with edges added and/or removed."""
        A = self.adjacency.copy()
        for u, v in remove:
            A[u, v] = A[v, u] = 0
        for u, v in add:
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            A[u, v] = A[v, u] = 1
        return Graph(A, self.labels)

    def label_pair(self, pair: Pair) -> tuple:
        return (self.labels[pair[0]], self.labels[pair[1]])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    """All triangles ``(u, v, w)`` with ``u < v < w``."""
    A = g.adjacency.astype(bool)
    out = []
    for u, v in g.edges:
        common = np.flatnonzero(A[u] & A[v])
        out.extend((u, v, int(w)) for w in common[common > v])
    return out


def triangle_counts(g: Graph) -> np.ndarray:
    """Number of triangles through each node."""
    A = g.A
    return np.rint(np.einsum("ij,ji->i", A @ A, A) / 2).astype(np.int64)


def triad_pairs(g: Graph) -> list[Pair]:
    """Non-adjacent pairs ``(u, v)``, ``u < v``, with at least one common neighbor."""
    A2 = g.A2
    mask = np.triu((A2 > 0) & (g.adjacency == 0), 1)
    us, vs = np.nonzero(mask)
    return list(zip(us.tolist(), vs.tolist()))


def open_triad_count(g: Graph) -> int:
    """Number of open wedges u-w-v (counted once per center w).

    A pair with k common neighbors contributes k wedges, so this is at
    least ``len(triad_pairs(g))``.
    """
    d = g.degrees
    return int((d * (d - 1) // 2).sum() - 3 * len(triangles(g)))


def local_clustering(g: Graph, u: int | None = None):
    """Local clustering coefficient ``2 t_u / (d_u (d_u - 1))``.

    Nodes of degree < 2 get 0. With ``u=None`` returns the whole vector.
    """
    t = triangle_counts(g)
    d = g.degrees
    denom = d * (d - 1)
    c = np.zeros(g.n)
    ok = denom > 0
    c[ok] = 2.0 * t[ok] / denom[ok]
    return c if u is None else float(c[u])


def avg_clustering(g: Graph) -> float:
    return float(local_clustering(g).mean())


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    ncomp, _ = connected_components(csr_matrix(g.adjacency), directed=False)
    return ncomp == 1


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by their smallest node."""
    _, lab = connected_components(csr_matrix(g.adjacency), directed=False)
    comps: dict[int, list[int]] = {}
    for node, c in enumerate(lab.tolist()):
        comps.setdefault(c, []).append(node)
    return sorted(comps.values(), key=lambda c: c[0])


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs BFS hop distances (``inf`` between components)."""
    return shortest_path(csr_matrix(g.adjacency), method="D", directed=False, unweighted=True)


def avg_path_length(g: Graph, normalization: str = "standard") -> float:
    """Mean shortest-path distance of a connected graph.

    ``standard`` divides the sum over ordered pairs ``u != v`` by ``n(n-1)``;
    ``paper-2m`` divides the same sum by ``2m``.
    """
    if normalization not in PATH_NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    if not is_connected(g):
        raise DisconnectedGraphError("average path length needs a connected graph")
    if g.n < 2:
        raise GraphError("average path length needs at least two nodes")
    total = distance_matrix(g).sum()
    if normalization == "standard":
        return float(total / (g.n * (g.n - 1)))
    return float(total / (2 * g.m))


def largest_component(g: Graph) -> Graph:
    comp = max(components(g), key=len)
    idx = np.asarray(comp)
    return Graph(g.adjacency[np.ix_(idx, idx)].copy(), tuple(g.labels[i] for i in comp))

