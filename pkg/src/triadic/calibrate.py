"""Grid calibration of ``(alpha, beta)`` over repeated closure trials."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import Graph
from .protocol import (
    ClosureLists,
    candidate_scores,
    detected_counts,
    normalize_order,
    random_baseline,
    reduce_triangles,
    trial_rng,
)

MECHANISMS = (
    "attractive-attractive",
    "attractive-repulsive",
    "repulsive-attractive",
    "repulsive-repulsive",
)

# cells x candidates evaluated per argsort block
_BLOCK_ELEMS = 4_000_000


@dataclass(frozen=True)
class GridSpec:
    alpha_min: float = -2.1
    alpha_max: float = 2.1
    beta_min: float = -2.1
    beta_max: float = 2.1
    step: float = 0.1
    fixed_alpha: float | None = None

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        for lo, hi in ((self.alpha_min, self.alpha_max), (self.beta_min, self.beta_max)):
            if hi < lo:
                raise ValueError(f"grid max {hi} below min {lo}")
            k = (hi - lo) / self.step
            if abs(k - round(k)) > 1e-9 * max(1.0, abs(k)):
                raise ValueError(f"grid range [{lo}, {hi}] is not a multiple of step {self.step}")

    @staticmethod
    def _axis(lo: float, hi: float, step: float) -> np.ndarray:
        k = int(round((hi - lo) / step))
        return np.round(lo + step * np.arange(k + 1), 12) + 0.0

    @property
    def alphas(self) -> np.ndarray:
        if self.fixed_alpha is not None:
            return np.array([float(self.fixed_alpha)])
        return self._axis(self.alpha_min, self.alpha_max, self.step)

    @property
    def betas(self) -> np.ndarray:
        return self._axis(self.beta_min, self.beta_max, self.step)

    def cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened ``(alpha, beta)`` arrays, alpha-major."""
        a, b = np.meshgrid(self.alphas, self.betas, indexing="ij")
        return a.ravel(), b.ravel()

    @property
    def size(self) -> int:
        return len(self.alphas) * len(self.betas)


@dataclass
class TrialResult:
    alpha_star: float
    beta_star: float
    detected_pct: float
    rand_pct: float
    r: int
    n_candidates: int
    residual_triangles: int
    infinite_eta: int
    reduced_connected: bool
    cells_evaluated: int


@dataclass
class CalibrationResult:
    per_trial: list[TrialResult]
    mean_alpha_star: float
    mean_beta_star: float
    mean_detected: float
    mean_rand: float
    std_alpha_star: float
    std_beta_star: float
    std_detected: float
    std_rand: float
    mechanism: str
    order: str
    extra: dict = field(default_factory=dict)

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("per_trial")
        d["trials"] = len(self.per_trial)
        return d


def classify_mechanism(alpha: float, beta: float) -> str:
    """Sign quadrant of ``(alpha, beta)``; zero counts as positive.

    A zero coordinate yields ``"boundary:<quadrant>"``.
    """
    a_pos = alpha >= 0
    b_pos = beta >= 0
    label = {
        (True, False): "attractive-attractive",
        (True, True): "attractive-repulsive",
        (False, False): "repulsive-attractive",
        (False, True): "repulsive-repulsive",
    }[(a_pos, b_pos)]
    if alpha == 0 or beta == 0:
        return f"boundary:{label}"
    return label


def best_cell(counts: np.ndarray, alphas: np.ndarray, betas: np.ndarray) -> int:
    """Index of the best cell; ties go to smallest ``(|alpha|, |beta|)``, then ``(alpha, beta)``."""
    best = counts.max()
    idx = np.flatnonzero(counts == best)
    keys = np.lexsort((betas[idx], alphas[idx], np.abs(betas[idx]), np.abs(alphas[idx])))
    return int(idx[keys[0]])


def evaluate_grid(
    xi2: np.ndarray, eta2: np.ndarray, in_R: np.ndarray, r: int, grid: GridSpec, order: str
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-``r`` hit counts for every grid cell."""
    alphas, betas = grid.cells()
    block = max(1, _BLOCK_ELEMS // max(1, len(xi2)))
    counts = np.empty(len(alphas), dtype=np.int64)
    for s in range(0, len(alphas), block):
        counts[s : s + block] = detected_counts(
            xi2, eta2, in_R, r, alphas[s : s + block], betas[s : s + block], order
        )
    return alphas, betas, counts


def grid_search_trial(
    g: Graph,
    grid: GridSpec,
    rng: np.random.Generator,
    order: str = "ascending",
    *,
    fraction: float = 1.0,
    rand_rng: np.random.Generator | None = None,
    rand_repetitions: int = 100,
    score_fn=None,
) -> tuple[TrialResult, ClosureLists]:
    """One reduction followed by a full grid sweep on cached scores.

    ``score_fn(lists) -> (xi2, eta2)`` overrides the exact scores (used for
    the bounds-based estimate).
    """
    order = normalize_order(order)
    lists = reduce_triangles(g, fraction, rng)
    r = lists.r
    if r == 0:
        raise ValueError("no triangles to remove: calibration needs r >= 1")
    xi2, eta2 = score_fn(lists) if score_fn is not None else candidate_scores(lists)
    in_R = lists.in_R
    alphas, betas, counts = evaluate_grid(xi2, eta2, in_R, r, grid, order)
    i = best_cell(counts, alphas, betas)
    rand = random_baseline(lists, rand_rng if rand_rng is not None else rng, rand_repetitions)
    res = TrialResult(
        alpha_star=float(alphas[i]),
        beta_star=float(betas[i]),
        detected_pct=100.0 * int(counts[i]) / r,
        rand_pct=rand,
        r=r,
        n_candidates=len(lists.L),
        residual_triangles=lists.residual_triangles,
        infinite_eta=int(np.isinf(eta2).sum()),
        reduced_connected=lists.reduced_connected,
        cells_evaluated=len(counts),
    )
    return res, lists


def calibrate(
    g: Graph,
    grid: GridSpec | None = None,
    trials: int = 100,
    master_seed: int = 0,
    order: str = "ascending",
    *,
    fraction: float = 1.0,
    rand_repetitions: int = 100,
    score_fn=None,
) -> CalibrationResult:
    grid = grid if grid is not None else GridSpec()
    order = normalize_order(order)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    per_trial = []
    for t in range(trials):
        res, _ = grid_search_trial(
            g,
            grid,
            trial_rng(master_seed, t, 0),
            order,
            fraction=fraction,
            rand_rng=trial_rng(master_seed, t, 1),
            rand_repetitions=rand_repetitions,
            score_fn=score_fn,
        )
        per_trial.append(res)
    a = np.array([t.alpha_star for t in per_trial])
    b = np.array([t.beta_star for t in per_trial])
    det = np.array([t.detected_pct for t in per_trial])
    rnd = np.array([t.rand_pct for t in per_trial])
    ma, mb = float(a.mean()), float(b.mean())
    return CalibrationResult(
        per_trial=per_trial,
        mean_alpha_star=ma,
        mean_beta_star=mb,
        mean_detected=float(det.mean()),
        mean_rand=float(rnd.mean()),
        std_alpha_star=float(a.std()),
        std_beta_star=float(b.std()),
        std_detected=float(det.std()),
        std_rand=float(rnd.std()),
        mechanism=classify_mechanism(ma, mb),
        order=order,
        extra={
            "grid_cells": grid.size,
            "residual_triangles_total": int(sum(t.residual_triangles for t in per_trial)),
            "infinite_eta_total": int(sum(t.infinite_eta for t in per_trial)),
            "disconnected_reductions": int(sum(not t.reduced_connected for t in per_trial)),
        },
    )
