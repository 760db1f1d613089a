"""Re-growing a partially de-triangulated network one edge at a time.

Each trial removes an edge from a fraction of the triangles, then re-adds
``r`` candidates from ``L`` either by best closure score (recomputed on the
current graph) or uniformly at random, recording clustering, average path
length and average communicability after every addition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .commdist import PairScorer
from .graph import DisconnectedGraphError, Graph, avg_clustering, avg_path_length, is_connected, largest_component
from .protocol import normalize_order, ranking_keys, reduce_triangles, trial_rng
from .spectral import avg_communicability, eig_sym, kernel

POLICIES = ("delta", "random")


@dataclass(frozen=True)
class StepMetrics:
    trial: int
    t: int
    policy: str
    clustering: float
    avg_path_len: float
    avg_comm: float
    path_len_on_largest_component: bool = False
    added: tuple[int, int] | None = None


@dataclass
class EvolutionTrace:
    policy: str
    trials: int
    rows: list[StepMetrics]
    r_per_trial: list[int]
    extra: dict = field(default_factory=dict)

    def by_trial(self) -> dict[int, list[StepMetrics]]:
        out: dict[int, list[StepMetrics]] = {}
        for row in self.rows:
            out.setdefault(row.trial, []).append(row)
        return out

    def final(self) -> list[StepMetrics]:
        return [rows[-1] for _, rows in sorted(self.by_trial().items())]

    def final_mean(self, metric: str) -> float:
        return float(np.mean([getattr(s, metric) for s in self.final()]))

    def aggregate(self) -> list[dict]:
        """Per-step mean and std across the trials that reached step ``t``."""
        steps: dict[int, list[StepMetrics]] = {}
        for row in self.rows:
            steps.setdefault(row.t, []).append(row)
        out = []
        for t in sorted(steps):
            rows = steps[t]
            rec = {"t": t, "policy": self.policy, "n_trials": len(rows)}
            for m in ("clustering", "avg_path_len", "avg_comm"):
                vals = np.array([getattr(s, m) for s in rows])
                rec[f"{m}_mean"] = float(vals.mean())
                rec[f"{m}_std"] = float(vals.std())
            out.append(rec)
        return out


def graph_metrics(g: Graph, normalization: str = "standard", dec=None) -> tuple[float, float, float, bool]:
    """``(clustering, avg_path_len, avg_comm, on_largest_component)``."""
    if dec is None:
        dec = eig_sym(g.A)
    comm = avg_communicability(kernel(dec))
    if is_connected(g):
        apl, flag = avg_path_length(g, normalization), False
    else:
        apl, flag = avg_path_length(largest_component(g), normalization), True
    return avg_clustering(g), apl, comm, flag


def run_trial(
    g: Graph,
    alpha: float,
    beta: float,
    policy: str,
    trial: int,
    master_seed: int,
    *,
    fraction: float = 0.5,
    metric_stride: int = 1,
    delta_stride: int = 1,
    normalization: str = "standard",
    order: str = "ascending",
) -> list[StepMetrics]:
    # the reduction stream is shared by both policies so their trials are paired
    lists = reduce_triangles(g, fraction, trial_rng(master_seed, trial, 0))
    pick_rng = trial_rng(master_seed, trial, 2)
    current = lists.reduced_graph
    cand = np.asarray(lists.L, dtype=np.int64).reshape(-1, 2)
    remaining = np.ones(len(cand), dtype=bool)
    r = lists.r

    dec = eig_sym(current.A)
    rows = [StepMetrics(trial, 0, policy, *graph_metrics(current, normalization, dec))]
    keys = None
    for t in range(1, r + 1):
        if policy == "delta":
            if keys is None or (t - 1) % delta_stride == 0:
                scorer = PairScorer(current, kernel(dec))
                xi2, eta2 = scorer.arrays([tuple(p) for p in cand])
                keys = ranking_keys(xi2, eta2, alpha, beta, order)
            masked = np.where(remaining, keys, np.inf)
            # rows are lexicographic; argmin returns the first minimum
            i = int(np.argmin(masked))
            if not remaining[i]:
                i = int(np.flatnonzero(remaining)[0])
        else:
            i = int(pick_rng.choice(np.flatnonzero(remaining)))
        remaining[i] = False
        u, v = int(cand[i, 0]), int(cand[i, 1])
        current = current.with_edges(add=[(u, v)])
        dec = eig_sym(current.A)
        if t % metric_stride == 0 or t == r:
            rows.append(
                StepMetrics(trial, t, policy, *graph_metrics(current, normalization, dec), added=(u, v))
            )
    return rows


def evolve(
    g: Graph,
    alpha_star: float,
    beta_star: float,
    fraction: float = 0.5,
    trials: int = 10,
    policy: str = "delta",
    master_seed: int = 0,
    metric_stride: int = 1,
    *,
    delta_stride: int = 1,
    normalization: str = "standard",
    order: str = "ascending",
) -> EvolutionTrace:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if metric_stride < 1 or delta_stride < 1:
        raise ValueError("strides must be >= 1")
    if not is_connected(g):
        raise DisconnectedGraphError("evolution needs a connected input graph")
    order = normalize_order(order)
    rows: list[StepMetrics] = []
    r_per_trial = []
    for trial in range(trials):
        tr = run_trial(
            g,
            alpha_star,
            beta_star,
            policy,
            trial,
            master_seed,
            fraction=fraction,
            metric_stride=metric_stride,
            delta_stride=delta_stride,
            normalization=normalization,
            order=order,
        )
        r_per_trial.append(tr[-1].t)
        rows.extend(tr)
    return EvolutionTrace(
        policy,
        trials,
        rows,
        r_per_trial,
        extra={
            "alpha_star": alpha_star,
            "beta_star": beta_star,
            "fraction": fraction,
            "order": order,
            "metric_stride": metric_stride,
            "delta_stride": delta_stride,
            "normalization": normalization,
        },
    )
