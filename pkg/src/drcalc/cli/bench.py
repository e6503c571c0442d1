"""Timing rows for the three evaluators of C(G)."""

from __future__ import annotations

import csv
import io
import time
from typing import Iterable

from ..drinvariant import cg_oracle_poly, zagier_value
from ..graphcore import StableGraph, h1

FIELDS = ("graph", "vertices", "edges", "h1", "method", "seconds", "terms", "degree", "agrees")
METHODS = ("oracle", "zagier-laurent", "zagier-division")


def _run(G: StableGraph, method: str):
    t0 = time.perf_counter()
    if method == "oracle":
        val, _ = cg_oracle_poly(G)
    else:
        val = zagier_value(G, "full", method.split("-")[1])
    return val, time.perf_counter() - t0


def bench_rows(graphs: Iterable[StableGraph], methods=METHODS, repeat: int = 1) -> list[dict]:
    rows = []
    for G in graphs:
        ref = None
        for m in methods:
            best = None
            for _ in range(repeat):
                val, sec = _run(G, m)
                best = sec if best is None else min(best, sec)
            ref = val if ref is None else ref
            rows.append({
                "graph": str(G),
                "vertices": G.n_vertices,
                "edges": G.n_edges,
                "h1": h1(G),
                "method": m,
                "seconds": f"{best:.6f}",
                "terms": len(val.terms),
                "degree": val.degree() if not val.is_zero() else -1,
                "agrees": val == ref,
            })
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def speedup(rows: list[dict], graph: str, fast: str = "zagier-laurent", slow: str = "oracle") -> float:
    t = {r["method"]: float(r["seconds"]) for r in rows if r["graph"] == graph}
    return t[slow] / max(t[fast], 1e-9)
