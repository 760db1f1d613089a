"""Closure experiment: break triangles, rank the candidate pairs by the
closure score, and count how many removed edges come out on top."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .commdist import PairScorer, delta_array
from .graph import Graph, Pair, sorted_pair, is_connected, triad_pairs, triangles

log = logging.getLogger(__name__)

ORDERS = ("ascending", "descending")

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_rng(master_seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for one trial: ``splitmix64(seed ^ trial)`` seeds a PCG64.

    ``stream`` separates uses within a trial (0: reduction, 1: baselines, ...).
    """
    key = splitmix64((int(master_seed) & _MASK64) ^ int(trial))
    key = splitmix64(key ^ int(stream))
    return np.random.Generator(np.random.PCG64(key))


def normalize_order(order: str) -> str:
    order = {"asc": "ascending", "desc": "descending"}.get(order, order)
    if order not in ORDERS:
        raise ValueError(f"unknown ranking order {order!r}")
    return order


@dataclass(frozen=True)
class ClosureLists:
    original: Graph
    reduced_graph: Graph
    R: tuple[Pair, ...]
    P: tuple[Pair, ...]
    L: tuple[Pair, ...]  # sorted lexicographically
    triangles_total: int
    triangles_processed: int
    residual_triangles: int
    skipped_already_removed: int = 0
    skipped_last_connection: int = 0
    reduced_connected: bool = True

    @property
    def r(self) -> int:
        return len(self.R)

    @property
    def in_R(self) -> np.ndarray:
        rset = set(self.R)
        return np.fromiter((p in rset for p in self.L), dtype=bool, count=len(self.L))


@dataclass
class RankingOutcome:
    ranked_pairs: list[Pair]
    r: int
    r_p: int
    detected_pct: float
    infinite_eta: int = 0
    extra: dict = field(default_factory=dict)


def reduce_triangles(g: Graph, fraction: float, rng: np.random.Generator) -> ClosureLists:
    """Remove one edge from each of ``ceil(fraction * T)`` randomly chosen triangles.

    Triangles are visited in a uniform random order. For each one an edge is
    drawn uniformly from its three edges; an edge that is already gone is not
    recorded again, and an edge is kept when it is the last remaining edge of
    any triangle of ``g``, so no triangle loses all three edges.
    """
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    tris = triangles(g)
    k = math.ceil(fraction * len(tris) - 1e-12)
    order = rng.permutation(len(tris))[:k]
    adj = g.adjacency.astype(bool)
    removed: set[Pair] = set()
    removed_list: list[Pair] = []
    dup = last = 0
    for ti in order:
        u, v, w = tris[ti]
        tri_edges = ((u, v), (u, w), (v, w))
        e = tri_edges[int(rng.integers(3))]
        if e in removed:
            dup += 1
            continue
        # keep e if it is the last edge of this or any other triangle through it
        a, b = e
        common = np.flatnonzero(adj[a] & adj[b])
        if any(sorted_pair(a, int(x)) in removed and sorted_pair(b, int(x)) in removed for x in common):
            last += 1
            continue
        removed.add(e)
        removed_list.append(e)
    reduced = g.with_edges(remove=removed_list)
    P = tuple(triad_pairs(g))
    R = tuple(sorted(removed_list))
    L = tuple(sorted(set(R) | set(P)))
    residual = len(triangles(reduced))
    connected = is_connected(reduced)
    if not connected:
        log.warning("reduced graph is disconnected; continuing")
    return ClosureLists(
        original=g,
        reduced_graph=reduced,
        R=R,
        P=P,
        L=L,
        triangles_total=len(tris),
        triangles_processed=k,
        residual_triangles=residual,
        skipped_already_removed=dup,
        skipped_last_connection=last,
        reduced_connected=connected,
    )


def ranking_keys(xi2: np.ndarray, eta2: np.ndarray, alpha: float, beta: float, order: str) -> np.ndarray:
    """Sort keys: smaller key ranks higher. Pairs with infinite eta2 get +inf."""
    d = delta_array(xi2, eta2, alpha, beta)
    key = d if order == "ascending" else -d
    return np.where(np.isinf(eta2), np.inf, key)


def detected_counts(
    xi2: np.ndarray,
    eta2: np.ndarray,
    in_R: np.ndarray,
    r: int,
    alphas: np.ndarray,
    betas: np.ndarray,
    order: str = "ascending",
) -> np.ndarray:
    """Number of R-pairs in the top ``r`` for every ``(alphas[i], betas[i])``.

    Arrays are aligned with the lexicographically sorted candidate list, so
    the stable sort breaks ties by pair id.
    """
    order = normalize_order(order)
    alphas = np.asarray(alphas, dtype=float)[:, None]
    betas = np.asarray(betas, dtype=float)[:, None]
    inf = np.isinf(eta2)
    e = np.where(inf, 0.0, eta2)
    d = alphas * xi2[None, :] - betas * e[None, :]
    key = d if order == "ascending" else -d
    key = np.where(inf[None, :], np.inf, key)
    top = np.argsort(key, axis=1, kind="stable")[:, :r]
    return in_R[top].sum(axis=1)


def candidate_scores(lists: ClosureLists, scorer: PairScorer | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(xi2, eta2)`` for every pair of ``L``, computed on the reduced graph."""
    scorer = scorer if scorer is not None else PairScorer(lists.reduced_graph)
    return scorer.arrays(list(lists.L))


def rank_candidates(
    lists: ClosureLists,
    alpha: float,
    beta: float,
    order: str = "ascending",
    scores: tuple[np.ndarray, np.ndarray] | None = None,
) -> RankingOutcome:
    order = normalize_order(order)
    xi2, eta2 = scores if scores is not None else candidate_scores(lists)
    key = ranking_keys(xi2, eta2, alpha, beta, order)
    idx = np.argsort(key, kind="stable")
    ranked = [lists.L[i] for i in idx]
    r = lists.r
    in_R = lists.in_R
    r_p = int(in_R[idx[:r]].sum())
    pct = 100.0 * r_p / r if r else float("nan")
    return RankingOutcome(ranked, r, r_p, pct, int(np.isinf(eta2).sum()))


def random_baseline(lists: ClosureLists, rng: np.random.Generator, repetitions: int = 1, chunk: int = 1000) -> float:
    """Mean detected percentage over uniform shuffles of ``L``."""
    r = lists.r
    if r == 0:
        raise ValueError("random baseline needs at least one removed edge")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    in_R = lists.in_R
    nL = len(lists.L)
    total = 0
    done = 0
    while done < repetitions:
        k = min(chunk, repetitions - done)
        perm = np.argsort(rng.random((k, nL)), axis=1)[:, :r]
        total += int(in_R[perm].sum())
        done += k
    return 100.0 * total / (r * repetitions)
