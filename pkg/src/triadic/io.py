"""Edge-list ingestion and deterministic CSV/JSON report writing."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path
from typing import Iterable

from .graph import Graph, GraphError


class EdgeListError(GraphError):
    pass


def parse_edge_list(path, one_based: bool = False) -> Graph:
    """Read ``u v`` integer pairs, one per line.

    Blank lines and lines starting with ``#`` are skipped. By default the
    distinct labels are mapped, in increasing order, to ids ``0..k-1``. With
    ``one_based`` label ``i`` becomes id ``i-1`` and ``n`` is the largest label,
    so unlisted nodes survive as isolated vertices.
    """
    text = Path(path).read_text()
    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise EdgeListError(f"{path}:{lineno}: expected two node labels, got {line!r}")
        try:
            raw.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise EdgeListError(f"{path}:{lineno}: non-integer node label in {line!r}") from None
    if not raw:
        raise EdgeListError(f"{path}: no edges")
    if one_based:
        lo = min(min(e) for e in raw)
        if lo < 1:
            raise EdgeListError(f"{path}: label {lo} is not a valid 1-based id")
        n = max(max(e) for e in raw)
        edges = [(u - 1, v - 1) for u, v in raw]
        labels = list(range(1, n + 1))
    else:
        labels = sorted({x for e in raw for x in e})
        index = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        edges = [(index[u], index[v]) for u, v in raw]
    return Graph.from_edges(n, edges, self_loops="skip", labels=labels)


def bundled_path(name: str = "zachary") -> Path:
    return Path(str(resources.files("triadic") / "data" / f"{name}.txt"))


def load_bundled(name: str = "zachary") -> Graph:
    return parse_edge_list(bundled_path(name))


def fmt(x) -> object:
    """Fixed formatting: floats at 6 significant digits, non-finite as strings."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.6g}")
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return fmt(x.item())
    return x


def _cell(x) -> str:
    x = fmt(x)
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, (list, dict)):
        return json.dumps(x, sort_keys=True)
    return "" if x is None else str(x)


def render_report(meta: dict, columns: list[str], rows: Iterable[dict], fmt_name: str = "csv") -> str:
    rows = list(rows)
    if fmt_name == "json":
        doc = {"meta": fmt(meta), "rows": [fmt({c: r.get(c) for c in columns}) for r in rows]}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt_name != "csv":
        raise ValueError(f"unknown format {fmt_name!r}")
    buf = io.StringIO()
    for k in sorted(meta):
        buf.write(f"# {k}: {json.dumps(fmt(meta[k]), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()
