"""Dense symmetric eigendecomposition and the two exponential kernels
``e^A`` (communicability) and ``e^{-A^2}`` (repulsive communicability)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .graph import Graph


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # non-increasing
    eigenvectors: np.ndarray  # columns are orthonormal eigenvectors

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def function(self, f) -> np.ndarray:
        """``Q diag(f(lambda)) Q^T``."""
        Q = self.eigenvectors
        return (Q * f(self.eigenvalues)) @ Q.T


@dataclass(frozen=True)
class CommunicabilityKernel:
    G: np.ndarray
    Gtilde: np.ndarray

    @property
    def n(self) -> int:
        return self.G.shape[0]


def eig_sym(A, *, sym_tol: float = 1e-12) -> SpectralDecomposition:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if A.size and np.max(np.abs(A - A.T)) > sym_tol:
        raise ValueError("matrix is not symmetric")
    try:
        w, Q = scipy.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver failed to converge: {exc}") from exc
    return SpectralDecomposition(w[::-1].copy(), Q[:, ::-1].copy())


def kernel(dec: SpectralDecomposition) -> CommunicabilityKernel:
    G = dec.function(np.exp)
    Gt = dec.function(lambda x: np.exp(-(x**2)))
    # exact symmetry; the products above are symmetric only up to rounding
    G = (G + G.T) / 2
    Gt = (Gt + Gt.T) / 2
    return CommunicabilityKernel(G, Gt)


def graph_kernel(g: Graph) -> CommunicabilityKernel:
    return kernel(eig_sym(g.A))


def avg_communicability(k: CommunicabilityKernel) -> float:
    """Mean of the off-diagonal entries of ``e^A`` over ordered pairs."""
    n = k.n
    if n < 2:
        raise ValueError("average communicability needs at least two nodes")
    return float((k.G.sum() - np.trace(k.G)) / (n * (n - 1)))


@dataclass(frozen=True)
class LambdaEstimate:
    """Power-iteration estimate of the largest adjacency eigenvalue.

    ``upper`` is a guaranteed upper bound on lambda_1: the smaller of the
    maximum degree and the Collatz-Wielandt ratio of the final iterate.
    """

    estimate: float
    upper: float
    d_max: int
    iterations: int


def largest_eigenvalue_estimate(g: Graph, tol: float = 1e-8, maxiter: int = 10_000) -> LambdaEstimate:
    A = g.A
    d_max = int(g.degrees.max()) if g.n else 0
    if d_max == 0:
        return LambdaEstimate(0.0, 0.0, 0, 0)
    # iterate with A + I: keeps the iterate positive and kills the
    # bipartite +/-lambda_1 oscillation
    x = np.ones(g.n) / np.sqrt(g.n)
    rho = 0.0
    it = 0
    for it in range(1, maxiter + 1):
        y = A @ x
        rho_new = float(x @ y)
        z = y + x
        x = z / np.linalg.norm(z)
        if abs(rho_new - rho) <= tol * max(abs(rho_new), 1.0):
            rho = rho_new
            break
        rho = rho_new
    y = A @ x
    rho = float(x @ y)
    cw = float(np.max(y / x)) if np.all(x > 0) else float(d_max)
    return LambdaEstimate(rho, min(cw, float(d_max)), d_max, it)
