import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import k, path, random_connected
from oracles import lanczos_one_step
from triadic.bounds import (
    BoundError,
    BoundInterval,
    SpectralBracket,
    coefficients,
    delta_bounds,
    eta2_bounds,
    eta2_upper_at_zero,
    lanczos_step,
    phi,
    xi2_bounds,
    xi2_bounds_nonadjacent,
)
from triadic.spectral import eig_sym, graph_kernel


def exact_halves(g):
    K = graph_kernel(g)
    dG, dT = np.diag(K.G), np.diag(K.Gtilde)
    X = (np.add.outer(dG, dG) - 2 * K.G) / 2
    Y = (np.add.outer(dT, dT) - 2 * K.Gtilde) / 2
    return X, Y


def test_phi_examples():
    assert phi(0, 1, 0) == pytest.approx(1.0, abs=1e-15)
    direct = (1 * (math.exp(-1) - math.exp(-2)) + math.exp(-2) - 2 * math.exp(-1)) / (1 - 2)
    assert phi(1, 2, 1) == pytest.approx(direct, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_phi_symmetric(x, y, c):
    if abs(x - y) < 1e-3:
        return
    assert phi(x, y, c) == pytest.approx(phi(y, x, c), rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(0.01, 0.99))
def test_phi_is_corner_of_2x2_exponential(x, y, s):
    if abs(x - y) < 1e-2:
        return
    # J with eigenvalues x, y and J_11 = s*x + (1-s)*y
    c = s * x + (1 - s) * y
    off = math.sqrt(max((c - x) * (y - c), 0.0))
    J = np.array([[c, off], [off, x + y - c]])
    assert phi(x, y, c) == pytest.approx(scipy.linalg.expm(-J)[0, 0], rel=1e-9)


def test_gamma_derivation_from_lanczos_residual():
    # gamma1^2 = ||A x0||^2 - omega1^2 = (d_u + d_v)/2 - (A^2)_uv - omega1^2
    rng = np.random.default_rng(7)
    g = random_connected(rng, 15, 0.3)
    A = g.A
    for u in range(g.n):
        for v in range(u + 1, g.n):
            x0 = np.zeros(g.n)
            x0[u], x0[v] = 1 / math.sqrt(2), -1 / math.sqrt(2)
            w1 = x0 @ (-A) @ x0
            lhs = np.sum((A @ x0) ** 2) - w1**2
            rhs = (g.degrees[u] + g.degrees[v]) / 2 - g.A2[u, v] - w1**2
            assert lhs == pytest.approx(rhs, abs=1e-12)
            assert w1 == pytest.approx(A[u, v], abs=1e-15)
            assert coefficients(g, u, v).gamma1_sq == pytest.approx(rhs, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(5, 25), st.floats(0.1, 0.5))
def test_coefficients_match_explicit_lanczos(seed, n, dens):
    g = random_connected(np.random.default_rng(seed), n, dens)
    A, A2 = g.A, g.A @ g.A
    for u in range(n):
        for v in range(u + 1, n):
            x0 = np.zeros(n)
            x0[u], x0[v] = 1 / math.sqrt(2), -1 / math.sqrt(2)
            c = coefficients(g, u, v)
            w, gm = lanczos_one_step(-A, x0)
            wt, gt = lanczos_one_step(A2, x0)
            assert abs(c.omega1 - w) <= 1e-10 and abs(c.gamma1 - gm) <= 1e-10
            assert abs(c.omega1_tilde - wt) <= 1e-10 and abs(c.gamma1_tilde - gt) <= 1e-10
            assert lanczos_step(A2, x0) == pytest.approx((wt, gt), abs=1e-12)


def test_k2_bounds():
    b = xi2_bounds(k(2), 0, 1, -1, 1)
    assert b.contains(1 / math.e, 1e-15)


def test_p3_bounds():
    g = path(3)
    r = math.sqrt(2) + 0.01
    assert xi2_bounds(g, 0, 2, -r, r).contains(1.0, 1e-12)
    assert eta2_bounds(g, 0, 2, 0.0, 2.1).contains(1.0, 1e-12)


def test_k3_eta_bounds():
    for u, v in [(0, 1), (0, 2), (1, 2)]:
        assert eta2_bounds(k(3), u, v, 0.0, 4.05).contains(math.exp(-1), 1e-12)


def test_nonadjacent_closed_form_agrees():
    g = random_connected(np.random.default_rng(3), 20, 0.2)
    br = SpectralBracket.for_graph(g)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.adjacency[u, v]:
                continue
            c = coefficients(g, u, v)
            gen = xi2_bounds(g, u, v, br.a, br.b)
            simp = xi2_bounds_nonadjacent(c.gamma1, br.a, br.b)
            assert abs(gen.lower - simp.lower) <= 1e-10
            assert abs(gen.upper - simp.upper) <= 1e-10


def test_eta_upper_zero_closed_form():
    g = random_connected(np.random.default_rng(4), 20, 0.25)
    br = SpectralBracket.for_graph(g)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = coefficients(g, u, v)
            if c.gamma1_tilde == 0:
                continue
            b = eta2_bounds(g, u, v, 0.0, br.b_t)
            assert b.upper == pytest.approx(eta2_upper_at_zero(c.omega1_tilde, c.gamma1_tilde), abs=1e-10)


def test_bad_interval_rejected():
    g = path(4)
    with pytest.raises(BoundError):
        xi2_bounds(g, 0, 1, 2.0, 3.0)  # omega1 = 1 not inside
    with pytest.raises(BoundError):
        xi2_bounds(g, 0, 0, -2, 2)


def test_gamma_zero_is_exact():
    # twin leaves of a star: x0 is in the null space of A
    g = k(2)
    b = xi2_bounds(g, 0, 1, -5, 5)
    assert b.lower == b.upper == pytest.approx(math.exp(-1))


def test_delta_bounds_trivial():
    xb, eb = BoundInterval(1.0, 2.0), BoundInterval(0.5, 0.7)
    assert delta_bounds(xb, eb, 1, 0) == xb
    assert delta_bounds(xb, eb, 0, -1) == eb


def _check_sandwich(g, bracket, slack=1e-9, ab_pairs=((0.5, 1.0),)):
    X, Y = exact_halves(g)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            xb = xi2_bounds(g, u, v, bracket.a, bracket.b)
            eb = eta2_bounds(g, u, v, bracket.a_t, bracket.b_t)
            assert xb.contains(X[u, v], slack), (u, v, xb, X[u, v])
            assert eb.contains(Y[u, v], slack), (u, v, eb, Y[u, v])
            for a, b in ab_pairs:
                db = delta_bounds(xb, eb, a, b)
                assert db.contains(a * X[u, v] - b * Y[u, v], slack)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(5, 30), st.floats(0.1, 0.5))
def test_sandwich_random(seed, n, dens):
    g = random_connected(np.random.default_rng(seed), n, dens)
    _check_sandwich(g, SpectralBracket.for_graph(g), ab_pairs=((0.5, 1.0), (-1.2, 0.3), (0.0, -1.0)))


def test_sandwich_with_dmax_bracket():
    g = random_connected(np.random.default_rng(11), 25, 0.2)
    d = float(g.degrees.max())
    _check_sandwich(g, SpectralBracket(-d, d, 0.0, d * d))


def test_widening_never_tightens():
    g = random_connected(np.random.default_rng(5), 18, 0.3)
    lam = eig_sym(g.A).eigenvalues[0]
    widths = [lam * 1.001, lam * 1.5, lam * 3]
    for u in range(g.n):
        for v in range(u + 1, g.n):
            xs = [xi2_bounds(g, u, v, -w, w) for w in widths]
            es = [eta2_bounds(g, u, v, 0.0, w * w) for w in widths]
            for seq in (xs, es):
                for narrow, wide in zip(seq, seq[1:]):
                    assert wide.lower <= narrow.lower + 1e-12
                    assert wide.upper >= narrow.upper - 1e-12
