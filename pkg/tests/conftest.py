import numpy as np
import pytest
from hypothesis import strategies as st

from triadic.graph import Graph, is_connected
from triadic.io import load_bundled

# original tree labels 1..5 -> ids 0..4: star 1-{2,3,4} plus 4-5
TREE_EDGES = [(0, 1), (0, 2), (0, 3), (3, 4)]


def tree():
    return Graph.from_edges(5, TREE_EDGES, labels=[1, 2, 3, 4, 5])


def k(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(n):
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def random_connected(rng, n, density):
    """Erdos-Renyi draw conditioned on connectivity (spanning path added if needed)."""
    A = np.triu(rng.random((n, n)) < density, 1)
    A = (A | A.T).astype(np.int8)
    g = Graph(A)
    if not is_connected(g):
        perm = rng.permutation(n)
        A = A.copy()
        for a, b in zip(perm[:-1], perm[1:]):
            A[a, b] = A[b, a] = 1
        g = Graph(A)
    return g


@st.composite
def graphs(draw, min_n=2, max_n=12, connected=False):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    A = np.zeros((n, n), dtype=np.int8)
    iu = np.triu_indices(n, 1)
    A[iu] = bits
    A = A + A.T
    if connected:
        for i in range(n - 1):
            A[i, i + 1] = A[i + 1, i] = 1
    return Graph(A)


@pytest.fixture
def fig1_tree():
    return tree()


@pytest.fixture(scope="session")
def zachary():
    return load_bundled("zachary")


# acceptance criteria register one line each here; printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
