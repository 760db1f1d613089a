"""Squared communicability distances and the closure score.

``xi2``  = G_uu + G_vv - 2 G_uv        with G  = e^A
``eta2`` = Gt_uu + Gt_vv - 2 Gt_uv     with Gt = e^{-A^2}
``delta(alpha, beta)`` = alpha * xi2 - beta * eta2

``eta2`` is +inf for pairs in different connected components of the
length-2-walk graph (edges where ``(A^2)_uv >= 1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .graph import Graph, Pair
from .spectral import CommunicabilityKernel, graph_kernel


@dataclass(frozen=True)
class PairScore:
    pair: Pair
    xi2: float
    eta2: float

    def delta(self, alpha: float, beta: float) -> float:
        return delta(self.xi2, self.eta2, alpha, beta)


def _sq_dist(M: np.ndarray, u, v):
    d = M[u, u] + M[v, v] - 2.0 * M[u, v]
    return np.maximum(d, 0.0)


def xi2(k: CommunicabilityKernel, u: int, v: int) -> float:
    if u == v:
        return 0.0
    return float(_sq_dist(k.G, u, v))


def eta2(k: CommunicabilityKernel, u: int, v: int, w2_labels: np.ndarray | None = None) -> float:
    """Squared repulsive distance.

    ``w2_labels`` are component labels from :func:`w2_labels`; without them
    the raw quadratic form is returned for every pair.
    """
    if u == v:
        return 0.0
    if w2_labels is not None and w2_labels[u] != w2_labels[v]:
        return float("inf")
    return float(_sq_dist(k.Gtilde, u, v))


def delta(xi2_val: float, eta2_val: float, alpha: float, beta: float) -> float:
    if np.isinf(eta2_val):
        if beta > 0:
            return float("-inf")
        if beta < 0:
            return float("inf")
        return alpha * xi2_val
    return alpha * xi2_val - beta * eta2_val


def delta_array(xi2_vals: np.ndarray, eta2_vals: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Vectorised :func:`delta` with the same infinity rules."""
    xi2_vals = np.asarray(xi2_vals, dtype=float)
    eta2_vals = np.asarray(eta2_vals, dtype=float)
    inf = np.isinf(eta2_vals)
    out = alpha * xi2_vals - beta * np.where(inf, 0.0, eta2_vals)
    if inf.any() and beta != 0:
        out[inf] = -np.inf if beta > 0 else np.inf
    return out


def w2_labels(g: Graph) -> np.ndarray:
    """Component label per node in the length-2-walk graph."""
    pattern = (g.A2 > 0).astype(np.int8)
    np.fill_diagonal(pattern, 0)
    _, lab = connected_components(csr_matrix(pattern), directed=False)
    return lab


def w2_components(g: Graph) -> list[list[int]]:
    lab = w2_labels(g)
    comps: dict[int, list[int]] = {}
    for node, c in enumerate(lab.tolist()):
        comps.setdefault(c, []).append(node)
    return sorted(comps.values(), key=lambda c: c[0])


class PairScorer:
    """Exact ``xi2``/``eta2`` for one graph, backed by a single eigendecomposition."""

    def __init__(self, g: Graph, k: CommunicabilityKernel | None = None):
        self.graph = g
        self.kernel = k if k is not None else graph_kernel(g)
        self.w2 = w2_labels(g)

    def xi2(self, u: int, v: int) -> float:
        return xi2(self.kernel, u, v)

    def eta2(self, u: int, v: int) -> float:
        return eta2(self.kernel, u, v, self.w2)

    def score(self, u: int, v: int) -> PairScore:
        return PairScore((u, v), self.xi2(u, v), self.eta2(u, v))

    def arrays(self, pairs: Sequence[Pair]) -> tuple[np.ndarray, np.ndarray]:
        """``(xi2, eta2)`` arrays for many pairs at once."""
        if len(pairs) == 0:
            return np.zeros(0), np.zeros(0)
        P = np.asarray(pairs, dtype=np.int64)
        u, v = P[:, 0], P[:, 1]
        x = _sq_dist(self.kernel.G, u, v)
        e = _sq_dist(self.kernel.Gtilde, u, v)
        e = np.where(self.w2[u] != self.w2[v], np.inf, e)
        same = u == v
        x[same] = 0.0
        e[same] = 0.0
        return x, e
