"""Command-line front end: ``drcalc <command> ...``.

Exit codes: 0 on success, 1 when a check or a method comparison fails,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from ..drclass import BudgetError, DRTable, assemble_dr, extract_coefficient, forget_pushforward
from ..drinvariant import CACHE, InvariantCache, OracleError, ZagierError, cg_oracle_poly, zagier_value
from ..drinvariant.corpus import corpus
from ..exactmath import fmt_rational, parse_rational
from ..graphcore import GraphError, StableGraph, banana, enumerate_stable_graphs
from ..identities import SUITES, run_suite, suite_ok
from .bench import bench_rows, speedup, to_csv
from .cache import DiskCache
from .config import Config


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj, out: str | None) -> None:
    text = obj if isinstance(obj, str) else _dump(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(arg: str):
    try:
        if arg.lstrip().startswith(("{", "[")):
            return json.loads(arg)
        return json.loads(Path(arg).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _read_graph(arg: str, stable: bool = True) -> StableGraph:
    """Parse a graph; C(G) itself only needs a connected multigraph."""
    try:
        G = StableGraph.from_json(_read_json(arg))
        return G.validate() if stable else G
    except GraphError as exc:
        raise InputError(str(exc)) from exc


# commands ------------------------------------------------------------------

def cmd_graphs(args, cfg: Config) -> int:
    graphs = enumerate_stable_graphs(args.g, args.n, args.max_edges)
    _emit({
        "schema": 1,
        "kind": "stable-graphs",
        "g": args.g,
        "n": args.n,
        "max_edges": args.max_edges,
        "count": len(graphs),
        "graphs": [G.to_json() for G in graphs],
    }, args.out)
    print(f"{len(graphs)} graphs", file=sys.stderr)
    return 0


def _cache(cfg: Config) -> InvariantCache:
    return InvariantCache(DiskCache(cfg.cache_dir))


def cmd_invariant(args, cfg: Config) -> int:
    G = _read_graph(args.graph, stable=False)
    if not G.is_connected():
        raise InputError("graph must be connected")
    methods = {
        "both": ["oracle", "zagier-laurent"],
        "all": ["oracle", "zagier-laurent", "zagier-division"],
    }.get(args.method, [args.method])
    cache = None if args.no_cache else _cache(cfg)
    results = {}
    for m in methods:
        if m == "oracle":
            compute = lambda H: cg_oracle_poly(H, checks=cfg.oracle_checks)[0]
        elif m in ("zagier-laurent", "zagier-division"):
            strat = m.split("-")[1]
            compute = lambda H, s=strat: zagier_value(H, "top" if args.top else "full", s)
        else:
            raise InputError(f"unknown method {m!r}")
        kind = f"{m}-{'top' if args.top else 'full'}"
        if m == "oracle" and args.top:
            full = cache.get(G, "oracle-full", compute) if cache else compute(G)
            val = full.homogeneous_part(2 * G.n_edges)
        else:
            val = cache.get(G, kind, compute) if cache else compute(G)
        results[m] = val
    values = list(results.values())
    agree = all(v == values[0] for v in values)
    out = {
        "schema": 1,
        "kind": "graph-invariant",
        "graph": G.to_json(),
        "part": "top" if args.top else "full",
        "methods": {m: {"value": v.to_json(), "value_text": str(v)} for m, v in results.items()},
        "agree": agree,
        "value_text": str(values[0]),
    }
    _emit(out, args.out)
    return 0 if agree else 1


def cmd_table(args, cfg: Config) -> int:
    t = assemble_dr(args.g, args.n, args.codim, args.flavor, budget=cfg.table_budget, jobs=cfg.jobs)
    _emit(t.to_json(), args.out)
    return 0


def _load_table(path: str) -> DRTable:
    try:
        return DRTable.from_json(_read_json(path))
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise InputError(f"malformed table: {exc}") from exc


def cmd_coeff(args, cfg: Config) -> int:
    t = _load_table(args.table)
    codims = [args.codim] if args.codim is not None else list(range(t.c_max + 1))
    rows = []
    try:
        for c in codims:
            for s, x in extract_coefficient(t, args.monomial, c).items():
                if x or args.all:
                    rows.append({"stratum": s.to_json(), "stratum_text": s.describe(), "codim": c, "coefficient": fmt_rational(x)})
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"schema": 1, "kind": "coefficients", "monomial": args.monomial, "entries": rows}, args.out)
    return 0


def _parse_values(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise InputError(f"expected name=value, got {part!r}")
        k, v = part.split("=", 1)
        try:
            out[k.strip()] = parse_rational(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad value {v!r}") from exc
    return out


def cmd_push(args, cfg: Config) -> int:
    t = _load_table(args.table)
    values = _parse_values(args.values) if args.values else None
    try:
        F = forget_pushforward(t, values)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    _emit({"schema": 1, "kind": "fine-table", "g": t.g, "n": t.n - 1, "entries": F.to_json()}, args.out)
    return 0


def cmd_verify(args, cfg: Config) -> int:
    reports = run_suite(args.suite, jobs=cfg.jobs, g=args.g, n=args.n, codim=args.codim, order=cfg.scalar_order)
    for r in reports:
        print(r.line())
    ok = suite_ok(reports)
    if args.report:
        Path(args.report).write_text(_dump({"schema": 1, "kind": "check-report", "suite": args.suite, "ok": ok, "reports": [r.to_json() for r in reports]}))
    print(f"{sum(r.ok for r in reports)}/{len(reports)} checks passed", file=sys.stderr)
    return 0 if ok else 1


def cmd_bench(args, cfg: Config) -> int:
    if args.graph:
        graphs = [_read_graph(args.graph, stable=False)]
    elif args.set == "banana3":
        graphs = [banana(3)]
    else:
        graphs = [banana(3)] + [G for G in corpus(args.max_edges) if G.n_edges >= 1]
    rows = bench_rows(graphs, repeat=args.repeat)
    _emit(to_csv(rows), args.out)
    b3 = str(banana(3))
    if any(r["graph"] == b3 for r in rows):
        print(f"banana3 speedup zagier-laurent vs oracle: {speedup(rows, b3):.1f}x", file=sys.stderr)
    return 0 if all(r["agrees"] for r in rows) else 1


def cmd_cache(args, cfg: Config) -> int:
    dc = DiskCache(cfg.cache_dir)
    if args.action == "info":
        _emit(dc.info(), None)
    else:
        n = dc.clear()
        CACHE.clear()
        print(f"removed {n} entries", file=sys.stderr)
    return 0


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drcalc", description="DR graph invariants, DR coefficient tables and identity checks.")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--jobs", type=int, help="worker processes (env DRCALC_JOBS)")
    p.add_argument("--strict", action="store_true", default=None, help="extra validation")
    p.add_argument("--cache-dir", help="invariant cache directory (env DRCALC_CACHE_DIR)")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("graphs", help="enumerate stable graphs")
    q.add_argument("action", choices=["gen"])
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--max-edges", type=int)
    q.add_argument("--out")
    q.set_defaults(func=cmd_graphs)

    q = sub.add_parser("invariant", help="compute C(G)")
    q.add_argument("--graph", required=True, help="graph JSON file or inline JSON")
    q.add_argument("--method", default="zagier-laurent", choices=["oracle", "zagier-laurent", "zagier-division", "both", "all"])
    q.add_argument("--top", action="store_true", help="top-degree part only")
    q.add_argument("--no-cache", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=cmd_invariant)

    q = sub.add_parser("table", help="assemble a DR coefficient table")
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--codim", type=int, required=True)
    q.add_argument("--flavor", default="full", choices=["full", "top"])
    q.add_argument("--out")
    q.set_defaults(func=cmd_table)

    q = sub.add_parser("coeff", help="extract the coefficient of a monomial in b, a2..an")
    q.add_argument("--table", required=True)
    q.add_argument("--monomial", required=True)
    q.add_argument("--codim", type=int)
    q.add_argument("--all", action="store_true", help="include zero coefficients")
    q.add_argument("--out")
    q.set_defaults(func=cmd_coeff)

    q = sub.add_parser("push", help="push a (g, n+1) table forward along forgetting the last marking")
    q.add_argument("--table", required=True)
    q.add_argument("--values", help="numeric charges, e.g. b=0,a1=1,a2=-1")
    q.add_argument("--out")
    q.set_defaults(func=cmd_push)

    q = sub.add_parser("verify", help="run identity checks")
    q.add_argument("--suite", default="all", choices=list(SUITES))
    q.add_argument("--g", type=int)
    q.add_argument("--n", type=int)
    q.add_argument("--codim", type=int)
    q.add_argument("--report")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("bench", help="time oracle against both tree-sum strategies (CSV)")
    q.add_argument("--set", default="banana3", choices=["banana3", "corpus"])
    q.add_argument("--graph")
    q.add_argument("--max-edges", type=int, default=2)
    q.add_argument("--repeat", type=int, default=1)
    q.add_argument("--out")
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("cache", help="inspect or clear the invariant cache")
    q.add_argument("action", choices=["info", "clear"])
    q.set_defaults(func=cmd_cache)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = Config.load(args.config, jobs=args.jobs, strict=args.strict, cache_dir=args.cache_dir)
        return args.func(args, cfg)
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetError, OracleError, ZagierError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
