import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs, k, path, star
from oracles import series_expm
from triadic.graph import Graph
from triadic.spectral import avg_communicability, eig_sym, graph_kernel, kernel, largest_eigenvalue_estimate

E = math.e


@pytest.mark.parametrize(
    "g,expected",
    [
        (k(2), [1.0, -1.0]),
        (k(3), [2.0, -1.0, -1.0]),
        (path(3), [math.sqrt(2), 0.0, -math.sqrt(2)]),  # roots of l^3 - 2l
    ],
)
def test_eig_sym_examples(g, expected):
    dec = eig_sym(g.A)
    assert np.allclose(dec.eigenvalues, expected, atol=1e-12)


def test_eig_sym_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        eig_sym(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_kernel_k2_closed_form():
    K = graph_kernel(k(2))
    assert np.allclose(K.G, [[math.cosh(1), math.sinh(1)], [math.sinh(1), math.cosh(1)]], atol=1e-14)


def test_kernel_k3_closed_form():
    K = graph_kernel(k(3))
    diag = (E**2 + 2 / E) / 3
    off = (E**2 - 1 / E) / 3
    assert np.allclose(np.diag(K.G), diag, atol=1e-13)
    assert K.G[0, 1] == pytest.approx(off, abs=1e-13)


def test_single_node_kernel():
    K = graph_kernel(Graph(np.zeros((1, 1), dtype=np.int8)))
    assert K.G.tolist() == [[1.0]]
    assert K.Gtilde.tolist() == [[1.0]]


def test_avg_communicability():
    assert avg_communicability(graph_kernel(k(2))) == pytest.approx(math.sinh(1), abs=1e-14)
    assert avg_communicability(graph_kernel(k(3))) == pytest.approx((E**2 - 1 / E) / 3, abs=1e-13)
    empty = Graph(np.zeros((3, 3), dtype=np.int8))
    assert avg_communicability(graph_kernel(empty)) == 0.0
    with pytest.raises(ValueError):
        avg_communicability(graph_kernel(Graph(np.zeros((1, 1), dtype=np.int8))))


@pytest.mark.parametrize("g,lam", [(k(3), 2.0), (star(4), math.sqrt(3)), (k(2), 1.0)])
def test_largest_eigenvalue_estimate(g, lam):
    tol = 1e-10
    est = largest_eigenvalue_estimate(g, tol=tol)
    assert est.estimate == pytest.approx(lam, rel=1e-6)
    assert est.upper >= lam - 1e-12
    assert est.upper <= est.d_max


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=8))
def test_decomposition_invariants(g):
    dec = eig_sym(g.A)
    Q, lam = dec.eigenvectors, dec.eigenvalues
    assert np.max(np.abs(Q.T @ Q - np.eye(g.n))) <= 1e-10
    assert np.max(np.abs(Q @ np.diag(lam) @ Q.T - g.A)) <= 1e-8 * max(1, abs(lam[0]))
    assert np.all(np.diff(lam) <= 0)


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=8))
def test_kernels_match_series(g):
    K = graph_kernel(g)
    assert np.max(np.abs(K.G - series_expm(g.A))) <= 1e-9
    assert np.max(np.abs(K.Gtilde - series_expm(-(g.A @ g.A), dps=120, tol=1e-60))) <= 1e-9
    lam = eig_sym(g.A).eigenvalues
    assert np.trace(K.G) == pytest.approx(np.exp(lam).sum(), abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=10, connected=True))
def test_kernel_properties(g):
    K = graph_kernel(g)
    assert np.allclose(K.G, K.G.T) and np.allclose(K.Gtilde, K.Gtilde.T)
    assert np.all(np.exp(-eig_sym(g.A).eigenvalues ** 2) > 0)
    assert np.all(np.linalg.eigvalsh(K.Gtilde) > -1e-12)
    assert np.all(np.diag(K.G) >= 1 - 1e-12)
    assert np.all(K.G > 0)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=12))
def test_eigenvalue_upper_is_rigorous(g):
    lam1 = eig_sym(g.A).eigenvalues[0]
    est = largest_eigenvalue_estimate(g)
    assert est.upper >= lam1 - 1e-9
