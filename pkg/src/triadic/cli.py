"""Batch command line front-end.

    triadic stats      GRAPH
    triadic distances  GRAPH [--pairs 2,3 1,5] [--alpha A --beta B]
    triadic bounds     GRAPH [--pairs ...]
    triadic calibrate  GRAPH [--trials 100 --seed S]
    triadic predict    GRAPH --alpha A --beta B [--top K]
    triadic evolve     GRAPH (--alpha A --beta B | --calibrate) [--policy both]

Exit codes: 0 success, 2 input error, 3 precondition violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import BoundError, SpectralBracket, delta_bounds, midpoint_scores, pair_bounds
from .calibrate import GridSpec, calibrate
from .commdist import PairScorer, delta_array
from .evolve import evolve
from .graph import (
    GraphError,
    avg_clustering,
    avg_path_length,
    is_connected,
    largest_component,
    open_triad_count,
    triad_pairs,
    triangles,
)
from .io import EdgeListError, parse_edge_list, render_report
from .protocol import normalize_order, ranking_keys
from .spectral import avg_communicability, graph_kernel

log = logging.getLogger("triadic")

EXIT_INPUT = 2
EXIT_PRECONDITION = 3


class PreconditionError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    seed: int = 0
    grid_min: float = -2.1
    grid_max: float = 2.1
    grid_step: float = 0.1
    trials: int | None = None
    fraction: float | None = None
    order: str = "ascending"
    path_norm: str = "standard"
    format: str = "csv"
    bounds: bool = False
    one_based: bool = False
    metric_stride: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.grid_step <= 0:
            raise ValueError("--grid-step must be positive")
        if self.grid_max < self.grid_min:
            raise ValueError("--grid-max must be >= --grid-min")
        if self.trials is not None and self.trials < 1:
            raise ValueError("--trials must be >= 1")
        if self.fraction is not None and not (0 < self.fraction <= 1):
            raise ValueError("--fraction must be in (0, 1]")
        if self.metric_stride < 1:
            raise ValueError("--metric-stride must be >= 1")
        self.order = normalize_order(self.order)

    def grid(self) -> GridSpec:
        return GridSpec(
            self.grid_min,
            self.grid_max,
            self.grid_min,
            self.grid_max,
            self.grid_step,
            fixed_alpha=self.extra.get("fix_alpha"),
        )


def _meta(cfg: RunConfig, **counters) -> dict:
    return {"version": __version__, "config": asdict(cfg), **counters}


def _resolve_pairs(g, specs):
    index = {lab: i for i, lab in enumerate(g.labels)}
    out = []
    for s in specs:
        try:
            a, b = (int(x) for x in s.split(","))
        except ValueError:
            raise EdgeListError(f"bad pair {s!r}; expected U,V") from None
        if a not in index or b not in index:
            raise EdgeListError(f"pair {s!r} references an unknown node label")
        out.append((index[a], index[b]))
    return out


def _pair_rows(g, pairs):
    for u, v in pairs:
        a, b = g.label_pair((u, v))
        yield {"u": a, "v": b}


def cmd_stats(cfg: RunConfig, g):
    tri = len(triangles(g))
    row = {
        "n": g.n,
        "m": g.m,
        "triangles": tri,
        "open_triad_pairs": len(triad_pairs(g)),
        "open_wedges": open_triad_count(g),
        "avg_clustering": avg_clustering(g),
        "duplicate_edges": g.duplicates,
        "self_loops_skipped": g.self_loops,
    }
    connected = is_connected(g)
    h = g if connected else largest_component(g)
    row["avg_path_length"] = avg_path_length(h, cfg.path_norm) if h.n > 1 else float("nan")
    row["path_length_on_largest_component"] = not connected
    row["avg_communicability"] = avg_communicability(graph_kernel(g)) if g.n > 1 else float("nan")
    rows = [{"metric": k, "value": v} for k, v in row.items()]
    return _meta(cfg), ["metric", "value"], rows


def _scores(cfg, g, pairs):
    if cfg.bounds:
        return midpoint_scores(g, pairs)
    return PairScorer(g).arrays(pairs)


def cmd_distances(cfg: RunConfig, g):
    pairs = _resolve_pairs(g, cfg.extra["pairs"]) if cfg.extra.get("pairs") else triad_pairs(g)
    alpha, beta = cfg.extra.get("alpha", 1.0), cfg.extra.get("beta", 0.0)
    xi2, eta2 = _scores(cfg, g, pairs)
    d = delta_array(xi2, eta2, alpha, beta)
    rows = []
    for base, x, e, dd in zip(_pair_rows(g, pairs), xi2, eta2, d):
        rows.append({**base, "xi2": float(x), "eta2": float(e), "delta": float(dd)})
    meta = _meta(cfg, infinite_eta=int(np.isinf(eta2).sum()), score_source="bounds" if cfg.bounds else "exact")
    return meta, ["u", "v", "xi2", "eta2", "delta"], rows


def cmd_bounds(cfg: RunConfig, g):
    pairs = _resolve_pairs(g, cfg.extra["pairs"]) if cfg.extra.get("pairs") else triad_pairs(g)
    bracket = SpectralBracket.for_graph(g)
    exact_max_n = cfg.extra.get("exact_max_n", 2000)
    scorer = PairScorer(g) if g.n <= exact_max_n else None
    alpha, beta = cfg.extra.get("alpha"), cfg.extra.get("beta")
    cols = ["u", "v", "xi2_lower", "xi2_upper", "eta2_lower", "eta2_upper"]
    if scorer is not None:
        cols += ["xi2_exact", "eta2_exact"]
    if alpha is not None and beta is not None:
        cols += ["delta_lower", "delta_upper"]
    rows = []
    for base, (u, v) in zip(_pair_rows(g, pairs), pairs):
        xb, eb = pair_bounds(g, u, v, bracket)
        row = {
            **base,
            "xi2_lower": 2 * xb.lower,
            "xi2_upper": 2 * xb.upper,
            "eta2_lower": 2 * eb.lower,
            "eta2_upper": 2 * eb.upper,
        }
        if scorer is not None:
            row["xi2_exact"] = scorer.xi2(u, v)
            # the bounds apply to the quadratic form, not to the +inf convention
            row["eta2_exact"] = float(
                scorer.kernel.Gtilde[u, u] + scorer.kernel.Gtilde[v, v] - 2 * scorer.kernel.Gtilde[u, v]
            )
        if "delta_lower" in cols:
            db = delta_bounds(xb, eb, alpha, beta)
            row["delta_lower"], row["delta_upper"] = 2 * db.lower, 2 * db.upper
        rows.append(row)
    meta = _meta(cfg, bracket=asdict(bracket))
    return meta, cols, rows


def _calibrate(cfg: RunConfig, g, trials: int, fraction: float = 1.0):
    if not triangles(g):
        raise PreconditionError("graph has no triangles; nothing to calibrate")
    score_fn = None
    if cfg.bounds:
        def score_fn(lists):
            return midpoint_scores(lists.reduced_graph, list(lists.L))
    return calibrate(
        g,
        cfg.grid(),
        trials=trials,
        master_seed=cfg.seed,
        order=cfg.order,
        fraction=fraction,
        rand_repetitions=cfg.extra.get("rand_reps", 100),
        score_fn=score_fn,
    )


def cmd_calibrate(cfg: RunConfig, g):
    res = _calibrate(cfg, g, cfg.trials or 100, cfg.fraction or 1.0)
    cols = [
        "trial",
        "alpha_star",
        "beta_star",
        "detected_pct",
        "rand_pct",
        "r",
        "n_candidates",
        "residual_triangles",
        "infinite_eta",
    ]
    rows = [{"trial": i, **asdict(t)} for i, t in enumerate(res.per_trial)]
    return _meta(cfg, summary=res.summary()), cols, rows


def cmd_predict(cfg: RunConfig, g):
    alpha, beta = cfg.extra["alpha"], cfg.extra["beta"]
    pairs = triad_pairs(g)
    xi2, eta2 = _scores(cfg, g, pairs)
    key = ranking_keys(xi2, eta2, alpha, beta, cfg.order)
    idx = np.argsort(key, kind="stable")
    top = cfg.extra.get("top")
    if top:
        idx = idx[:top]
    d = delta_array(xi2, eta2, alpha, beta)
    rows = []
    for rank, i in enumerate(idx, start=1):
        a, b = g.label_pair(pairs[i])
        rows.append({"rank": rank, "u": a, "v": b, "xi2": xi2[i], "eta2": eta2[i], "delta": d[i]})
    meta = _meta(cfg, infinite_eta=int(np.isinf(eta2).sum()), candidates=len(pairs))
    return meta, ["rank", "u", "v", "xi2", "eta2", "delta"], rows


def cmd_evolve(cfg: RunConfig, g):
    if not is_connected(g):
        raise PreconditionError("evolution needs a connected input graph")
    alpha, beta = cfg.extra.get("alpha"), cfg.extra.get("beta")
    meta_extra = {}
    if cfg.extra.get("calibrate"):
        res = _calibrate(cfg, g, cfg.extra.get("calib_trials") or 100)
        alpha, beta = res.mean_alpha_star, res.mean_beta_star
        meta_extra["calibration"] = res.summary()
    if alpha is None or beta is None:
        raise PreconditionError("evolve needs --alpha and --beta, or --calibrate")
    policies = ("delta", "random") if cfg.extra.get("policy", "both") == "both" else (cfg.extra["policy"],)
    rows = []
    flagged = 0
    for pol in policies:
        tr = evolve(
            g,
            alpha,
            beta,
            fraction=cfg.fraction or 0.5,
            trials=cfg.trials or 10,
            policy=pol,
            master_seed=cfg.seed,
            metric_stride=cfg.metric_stride,
            delta_stride=cfg.extra.get("delta_stride", 1),
            normalization=cfg.path_norm,
            order=cfg.order,
        )
        flagged += sum(s.path_len_on_largest_component for s in tr.rows)
        rows.extend(asdict(s) for s in tr.rows)
        meta_extra[f"final_{pol}"] = {
            m: tr.final_mean(m) for m in ("clustering", "avg_path_len", "avg_comm")
        }
    meta = _meta(cfg, alpha_star=alpha, beta_star=beta, path_len_on_largest_component_rows=flagged, **meta_extra)
    return meta, ["trial", "t", "policy", "clustering", "avg_path_len", "avg_comm"], rows


COMMANDS = {
    "stats": cmd_stats,
    "distances": cmd_distances,
    "bounds": cmd_bounds,
    "calibrate": cmd_calibrate,
    "predict": cmd_predict,
    "evolve": cmd_evolve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="edge list: one 'u v' pair per line, '#' comments")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid-min", type=float, default=-2.1)
    common.add_argument("--grid-max", type=float, default=2.1)
    common.add_argument("--grid-step", type=float, default=0.1)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--fraction", type=float, default=None)
    common.add_argument("--order", choices=("asc", "desc"), default="asc")
    common.add_argument("--path-norm", choices=("standard", "paper-2m"), default="standard")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--bounds", action="store_true", help="use Radau-bound midpoints instead of exact kernels")
    common.add_argument("--one-based", action="store_true")
    common.add_argument("--metric-stride", type=int, default=1)
    common.add_argument("-o", "--output", default="-", help="report path (default stdout)")

    p = argparse.ArgumentParser(prog="triadic", description="Triadic closure via communicability distances.")
    p.add_argument("--version", action="version", version=f"triadic {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("stats", parents=[common], help="basic network statistics")

    sp = sub.add_parser("distances", parents=[common], help="xi2, eta2, delta per pair")
    sp.add_argument("--pairs", nargs="+", metavar="U,V")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--beta", type=float, default=0.0)

    sp = sub.add_parser("bounds", parents=[common], help="Gauss-Radau bounds per pair")
    sp.add_argument("--pairs", nargs="+", metavar="U,V")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--exact-max-n", type=int, default=2000)

    sp = sub.add_parser("calibrate", parents=[common], help="grid calibration of (alpha, beta)")
    sp.add_argument("--fix-alpha", type=float, default=None, help="single-parameter mode")
    sp.add_argument("--rand-reps", type=int, default=100)

    sp = sub.add_parser("predict", parents=[common], help="rank open triads of the input")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--top", type=int, default=None)

    sp = sub.add_parser("evolve", parents=[common], help="edge re-addition experiment")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--calibrate", action="store_true", help="calibrate first and use the mean optimum")
    sp.add_argument("--policy", choices=("delta", "random", "both"), default="both")
    sp.add_argument("--calib-trials", type=int, default=None, help="calibration trials with --calibrate (default 100)")
    sp.add_argument("--delta-stride", type=int, default=1)
    sp.add_argument("--fix-alpha", type=float, default=None)
    sp.add_argument("--rand-reps", type=int, default=100)
    return p


_COMMON_KEYS = {f.name for f in RunConfig.__dataclass_fields__.values()} - {"command", "extra"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    d.pop("output", None)
    d.pop("verbose", None)
    common = {k: d.pop(k) for k in list(d) if k in _COMMON_KEYS}
    command = d.pop("command")
    extra = {k: v for k, v in d.items() if v is not None}
    cfg = RunConfig(command=command, **common, extra=extra)
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> str:
    g = parse_edge_list(cfg.input, one_based=cfg.one_based)
    meta, cols, rows = COMMANDS[cfg.command](cfg, g)
    return render_report(meta, cols, rows, cfg.format)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.ERROR, format="%(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"triadic: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        text = run(cfg)
    except (FileNotFoundError, EdgeListError) as exc:
        print(f"triadic: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionError, GraphError, BoundError, ValueError) as exc:
        print(f"triadic: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if ns.output == "-":
        sys.stdout.write(text)
    else:
        Path(ns.output).write_text(text)
    log.info("elapsed %.3fs", time.perf_counter() - t0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
