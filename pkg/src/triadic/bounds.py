"""One-step Lanczos / Gauss-Radau bounds on ``xi2/2``, ``eta2/2`` and ``delta/2``.

Both squared distances are quadratic forms ``x0^T f(M) x0`` with
``x0 = (e_u - e_v)/sqrt(2)`` and ``f(t) = exp(-t)``, a strictly completely
monotonic function: ``M = -A`` for ``xi2`` and ``M = A^2`` for ``eta2``. One
Lanczos step from ``x0`` gives the 2x2 Jacobi matrix; prescribing one of its
eigenvalues at an end of the spectral interval of ``M`` yields a Radau rule
whose value is an upper bound (left end) or a lower bound (right end).

The Lanczos coefficients need only degrees and entries of ``A^2``, so no
matrix function is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .commdist import w2_labels
from .graph import Graph
from .spectral import LambdaEstimate, largest_eigenvalue_estimate

# confluent-node perturbation in phi; see phi()
_CONFLUENT_EPS = 1e-9
_GAMMA_NEG_TOL = 1e-12


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class RadauCoefficients:
    omega1: float
    gamma1: float
    omega1_tilde: float
    gamma1_tilde: float

    @property
    def gamma1_sq(self) -> float:
        return self.gamma1**2

    @property
    def gamma1_tilde_sq(self) -> float:
        return self.gamma1_tilde**2


@dataclass(frozen=True)
class BoundInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise BoundError(f"empty interval [{self.lower}, {self.upper}]")

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def phi(x: float, y: float, c: float) -> float:
    """``e_1^T exp(-J) e_1`` for a 2x2 symmetric ``J`` with ``J_11 = c`` and
    eigenvalues ``x``, ``y``:

        (c (e^-x - e^-y) + x e^-y - y e^-x) / (x - y)

    For ``x == y`` the second node is shifted by ``1e-9``; the induced error is
    of order ``1e-9 * e^-x``. Callers short-circuit the only case where this
    can legitimately happen (``gamma = 0``).
    """
    if x == y:
        y = y + _CONFLUENT_EPS * max(1.0, abs(y))
    ex, ey = math.exp(-x), math.exp(-y)
    return (c * (ex - ey) + x * ey - y * ex) / (x - y)


def coefficients(g: Graph, u: int, v: int) -> RadauCoefficients:
    """Closed-form Lanczos coefficients for the pair ``(u, v)``.

    With ``x0 = (e_u - e_v)/sqrt(2)``:

    * on ``-A``:  omega1 = a_uv,  gamma1^2 = (d_u + d_v)/2 - (A^2)_uv - omega1^2
    * on ``A^2``: omega1~ = gamma1^2 + omega1^2,
      gamma1~^2 = 1/2 sum_w ((A^2)_uw - (A^2)_vw)^2 - omega1~^2
    """
    if u == v:
        raise BoundError("bounds need two distinct nodes")
    A2 = g.A2
    d = g.degrees
    # integer arithmetic: every quantity below is an exact half-integer
    w1 = int(g.adjacency[u, v])
    g1_sq_x2 = int(d[u] + d[v]) - 2 * int(A2[u, v]) - 2 * w1 * w1
    diff = A2[u] - A2[v]
    s_x2 = int(diff @ diff)
    wt_x2 = g1_sq_x2 + 2 * w1 * w1
    # gamma1~^2 = s/2 - (wt/2)^2, scaled by 4 to stay integral
    gt_sq_x4 = 2 * s_x2 - wt_x2 * wt_x2
    g1_sq = g1_sq_x2 / 2
    gt_sq = gt_sq_x4 / 4
    if g1_sq < -_GAMMA_NEG_TOL or gt_sq < -_GAMMA_NEG_TOL:
        raise BoundError(f"negative gamma^2 for pair ({u}, {v})")
    return RadauCoefficients(
        omega1=float(w1),
        gamma1=math.sqrt(max(g1_sq, 0.0)),
        omega1_tilde=wt_x2 / 2,
        gamma1_tilde=math.sqrt(max(gt_sq, 0.0)),
    )


def lanczos_step(M: np.ndarray, x0: np.ndarray) -> tuple[float, float]:
    """One symmetric Lanczos step: ``(omega1, gamma1)`` for unit ``x0``."""
    y = M @ x0
    omega = float(x0 @ y)
    r = y - omega * x0
    return omega, float(np.linalg.norm(r))


def _radau_value(omega: float, gamma: float, tau: float) -> float:
    """Radau rule with prescribed node ``tau`` for ``exp(-t)``."""
    if gamma == 0.0:
        return math.exp(-omega)
    if tau == omega:
        raise BoundError("prescribed node coincides with omega1")
    mu2 = omega + gamma * gamma / (omega - tau)
    return phi(tau, mu2, omega)


def _radau_interval(omega: float, gamma: float, left: float, right: float) -> BoundInterval:
    if left > right:
        raise BoundError(f"bad spectral interval [{left}, {right}]")
    if gamma == 0.0:
        val = math.exp(-omega)
        return BoundInterval(val, val)
    if not (left <= omega <= right):
        raise BoundError(
            f"omega1={omega} outside [{left}, {right}]: interval does not contain the spectrum"
        )
    lo = _radau_value(omega, gamma, right)
    hi = _radau_value(omega, gamma, left)
    if lo > hi:
        # rounding only; the ordering is exact in theory
        lo, hi = hi, lo
    return BoundInterval(lo, hi)


def xi2_bounds(g: Graph, u: int, v: int, a: float, b: float) -> BoundInterval:
    """Bounds on ``xi2_uv / 2``; ``[a, b]`` must contain the spectrum of ``-A``."""
    c = coefficients(g, u, v)
    return _radau_interval(c.omega1, c.gamma1, a, b)


def xi2_bounds_nonadjacent(gamma1: float, a: float, b: float) -> BoundInterval:
    """Simplified closed form for ``a_uv = 0`` (then ``omega1 = 0``)."""
    if gamma1 == 0.0:
        return BoundInterval(1.0, 1.0)
    g2 = gamma1 * gamma1

    def f(t):
        return (t * t * math.exp(g2 / t) + g2 * math.exp(-t)) / (t * t + g2)

    return BoundInterval(f(b), f(a))


def eta2_bounds(g: Graph, u: int, v: int, a_t: float, b_t: float) -> BoundInterval:
    """Bounds on the quadratic form ``eta2_uv / 2``; ``[a_t, b_t]`` must contain
    the spectrum of ``A^2``.

    The bound is on ``x0^T e^{-A^2} x0`` itself; it ignores the +inf convention
    for pairs in different components of the length-2-walk graph.
    """
    c = coefficients(g, u, v)
    if c.gamma1_tilde == 0.0:
        return BoundInterval(math.exp(-c.omega1_tilde), math.exp(-c.omega1_tilde))
    if a_t == 0.0 and c.omega1_tilde == 0.0:
        raise BoundError(f"degenerate pair ({u}, {v}): omega1~ = 0 with a_t = 0")
    return _radau_interval(c.omega1_tilde, c.gamma1_tilde, a_t, b_t)


def eta2_upper_at_zero(omega_t: float, gamma_t: float) -> float:
    """Closed form of the upper bound for ``a_t = 0``."""
    w2, g2 = omega_t * omega_t, gamma_t * gamma_t
    return (w2 * math.exp(-(w2 + g2) / omega_t) + g2) / (w2 + g2)


def delta_bounds(xi_b: BoundInterval, eta_b: BoundInterval, alpha: float, beta: float) -> BoundInterval:
    """Bounds on ``delta/2 = alpha * xi2/2 - beta * eta2/2`` by interval arithmetic."""
    xs = (alpha * xi_b.lower, alpha * xi_b.upper)
    es = (-beta * eta_b.lower, -beta * eta_b.upper)
    return BoundInterval(min(xs) + min(es), max(xs) + max(es))


@dataclass(frozen=True)
class SpectralBracket:
    """Intervals containing the spectra of ``-A`` and of ``A^2``."""

    a: float
    b: float
    a_t: float
    b_t: float

    @classmethod
    def for_graph(cls, g: Graph, eps: float = 1e-6, estimate: LambdaEstimate | None = None) -> "SpectralBracket":
        est = estimate if estimate is not None else largest_eigenvalue_estimate(g)
        lam = max(est.upper, est.estimate * (1 + eps))
        return cls(-lam, lam, 0.0, lam * lam)


def pair_bounds(g: Graph, u: int, v: int, bracket: SpectralBracket) -> tuple[BoundInterval, BoundInterval]:
    return (
        xi2_bounds(g, u, v, bracket.a, bracket.b),
        eta2_bounds(g, u, v, bracket.a_t, bracket.b_t),
    )


def midpoint_scores(g: Graph, pairs, bracket: SpectralBracket | None = None):
    """Bound-midpoint estimates of ``(xi2, eta2)`` for many pairs.

    Pairs in different components of the length-2-walk graph get
    ``eta2 = inf``, as in the exact path.
    """
    bracket = bracket if bracket is not None else SpectralBracket.for_graph(g)
    lab = w2_labels(g)
    xi = np.empty(len(pairs))
    eta = np.empty(len(pairs))
    for i, (u, v) in enumerate(pairs):
        if u == v:
            xi[i] = eta[i] = 0.0
            continue
        xb, eb = pair_bounds(g, u, v, bracket)
        xi[i] = 2.0 * xb.mid
        eta[i] = 2.0 * eb.mid if lab[u] == lab[v] else np.inf
    return xi, eta
