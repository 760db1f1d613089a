import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import k, path, random_connected, tree
from triadic.graph import Graph, triad_pairs, triangles
from triadic.protocol import (
    ClosureLists,
    candidate_scores,
    detected_counts,
    random_baseline,
    rank_candidates,
    reduce_triangles,
    splitmix64,
    trial_rng,
)


def clustered(seed, n=30, dens=0.25):
    return random_connected(np.random.default_rng(seed), n, dens)


def test_splitmix_reference_value():
    # first output of the reference splitmix64 stream seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_k3_reduction():
    lists = reduce_triangles(k(3), 1.0, trial_rng(0, 0))
    assert lists.r == 1
    assert lists.P == ()
    assert lists.reduced_graph.m == 2
    assert len(triangles(lists.reduced_graph)) == 0


def test_tree_reduction():
    lists = reduce_triangles(tree(), 0.5, trial_rng(0, 0))
    assert lists.R == ()
    assert lists.L == ((0, 4), (1, 2), (1, 3), (2, 3))  # labels (1,5),(2,3),(2,4),(3,4)


def test_zachary_reduction(zachary):
    lists = reduce_triangles(zachary, 1.0, trial_rng(1, 0))
    assert lists.r <= 45
    assert len(lists.P) == 265
    assert lists.triangles_total == 45


def test_fraction_validation():
    for f in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            reduce_triangles(k(3), f, trial_rng(0, 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5000), st.sampled_from([0.3, 0.5, 1.0]))
def test_reduction_invariants(seed, fraction):
    g = clustered(seed % 50)
    tris = triangles(g)
    if not tris:
        return
    lists = reduce_triangles(g, fraction, trial_rng(seed, 0))
    assert not set(lists.R) & set(lists.P)
    for u, v in lists.R:
        assert g.adjacency[u, v] == 1
        assert lists.reduced_graph.adjacency[u, v] == 0
    assert lists.residual_triangles < len(tris)
    assert lists.r <= len(tris)
    # no triangle of the original graph loses all three edges
    removed = set(lists.R)
    for u, v, w in tris:
        assert sum(e in removed for e in ((u, v), (u, w), (v, w))) <= 2
    assert set(lists.L) == set(lists.R) | set(triad_pairs(g))
    assert list(lists.L) == sorted(lists.L)


def test_reduction_reproducible(zachary):
    a = reduce_triangles(zachary, 1.0, trial_rng(42, 3))
    b = reduce_triangles(zachary, 1.0, trial_rng(42, 3))
    assert a.R == b.R
    assert np.array_equal(a.reduced_graph.adjacency, b.reduced_graph.adjacency)


def _lists_from(R, P, n=10):
    g = Graph(np.zeros((n, n), dtype=np.int8))
    L = tuple(sorted(set(R) | set(P)))
    return ClosureLists(g, g, tuple(sorted(R)), tuple(sorted(P)), L, len(R), len(R), 0)


def test_rank_all_R_smallest():
    lists = _lists_from([(0, 1), (0, 2)], [(1, 2), (3, 4), (5, 6)])
    in_R = lists.in_R
    xi2 = np.where(in_R, 0.5, 3.0)
    out = rank_candidates(lists, 1.0, 0.0, scores=(xi2, np.ones(len(xi2))))
    assert out.detected_pct == 100.0
    assert out.r_p == 2


def test_rank_L_equals_R():
    lists = _lists_from([(0, 1), (0, 2), (3, 4)], [])
    for a, b in [(1, 0), (-2, 1.3), (0.4, -2)]:
        out = rank_candidates(lists, a, b, scores=(np.array([1.0, 5.0, 2.0]), np.array([0.3, 0.2, 0.1])))
        assert out.detected_pct == 100.0


def test_infinite_eta_ranked_last():
    lists = _lists_from([(0, 1)], [(2, 3), (4, 5)])
    xi2 = np.array([1.0, 1.0, 1.0])
    eta2 = np.array([np.inf, 1.0, 2.0])
    for order in ("ascending", "descending"):
        for b in (-1.0, 0.0, 1.0):
            out = rank_candidates(lists, 1.0, b, order, scores=(xi2, eta2))
            assert out.ranked_pairs[-1] == (0, 1)
            assert out.infinite_eta == 1


def test_random_baseline_trivial():
    lists = _lists_from([(0, 1), (0, 2)], [])
    assert random_baseline(lists, np.random.default_rng(0), 50) == 100.0
    with pytest.raises(ValueError):
        random_baseline(_lists_from([], [(0, 1)]), np.random.default_rng(0))


def test_random_baseline_half():
    R = [(0, i) for i in range(1, 6)]
    P = [(1, i) for i in range(2, 7)]
    lists = _lists_from(R, P)
    # hypergeometric mean: 100 * r / |L|
    assert random_baseline(lists, np.random.default_rng(1), 20_000) == pytest.approx(50.0, abs=1.0)


def test_zachary_random_baseline(zachary):
    lists = reduce_triangles(zachary, 1.0, trial_rng(5, 0))
    got = random_baseline(lists, np.random.default_rng(2), 10_000)
    assert got == pytest.approx(100 * lists.r / len(lists.L), abs=1.0)
    assert 8 <= got <= 16


def test_detected_counts_matches_rank(zachary):
    lists = reduce_triangles(zachary, 1.0, trial_rng(9, 0))
    xi2, eta2 = candidate_scores(lists)
    rng = np.random.default_rng(0)
    alphas = rng.uniform(-2, 2, 5)
    betas = rng.uniform(-2, 2, 5)
    for order in ("ascending", "descending"):
        counts = detected_counts(xi2, eta2, lists.in_R, lists.r, alphas, betas, order)
        for a, b, c in zip(alphas, betas, counts):
            assert rank_candidates(lists, a, b, order, scores=(xi2, eta2)).r_p == c


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(-2, 2), st.floats(-2, 2))
def test_sign_flip_invariance(seed, a, b):
    g = clustered(seed % 40, 25, 0.3)
    if not triangles(g):
        return
    lists = reduce_triangles(g, 1.0, trial_rng(seed, 0))
    sc = candidate_scores(lists)
    up = rank_candidates(lists, a, b, "ascending", scores=sc)
    down = rank_candidates(lists, -a, -b, "descending", scores=sc)
    assert up.detected_pct == down.detected_pct
    assert up.ranked_pairs == down.ranked_pairs
