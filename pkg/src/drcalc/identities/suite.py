"""Named check suites, run as independent jobs with deterministic aggregation."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from ..drinvariant.corpus import base_corpus, corpus
from .globalchecks import check_codim_minus_deg, check_dr_push, check_dr_push_numeric, check_topdeg_global
from .pergraph import check_aux_lemma, check_corollary_inversion, check_topdeg_per_graph, check_unidr_delta
from .qbar import check_qbar
from .report import CheckReport
from .scalar import check_scalar_identities

GLOBAL_GN = [(1, 1), (1, 2), (2, 0), (2, 1)]
PUSH_CASES = [(1, 1, 1), (1, 1, 2), (2, 1, 1)]
SUITES = ("all", "scalar", "topdeg", "corollary", "aux", "codimdeg", "push", "qbar", "delta")


def _as_list(x) -> list[CheckReport]:
    return x if isinstance(x, list) else [x]


def _call(job: tuple[Callable, tuple]) -> list[CheckReport]:
    fn, args = job
    return _as_list(fn(*args))


def jobs_for(suite: str, g: int | None = None, n: int | None = None, codim: int | None = None, order: int = 20) -> list[tuple[Callable, tuple]]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    pick = lambda name: suite in ("all", name)
    jobs: list[tuple[Callable, tuple]] = []
    if pick("scalar"):
        jobs.append((check_scalar_identities, (order,)))
    if pick("qbar"):
        jobs.append((check_qbar, (6,)))
    graphs = None
    if any(pick(s) for s in ("topdeg", "corollary", "aux")):
        graphs = corpus()
    if pick("topdeg"):
        jobs += [(check_topdeg_per_graph, (G,)) for G in graphs]
    if pick("corollary"):
        jobs += [(check_corollary_inversion, (G, s)) for G in graphs for s in ("laurent", "division")]
    if pick("aux"):
        jobs += [(check_aux_lemma, (G,)) for G in graphs]
    if pick("delta"):
        jobs += [(check_unidr_delta, (G,)) for G in base_corpus(3) if G.n_legs]
    gn = [(g, n)] if g is not None and n is not None else GLOBAL_GN
    c = codim if codim is not None else 2
    if pick("codimdeg"):
        jobs += [(check_codim_minus_deg, (gg, nn, c)) for gg, nn in gn if gg >= 1]
    if pick("topdeg"):
        jobs += [(check_topdeg_global, (gg, nn, c)) for gg, nn in gn]
    if pick("push"):
        cases = [(g, n, codim)] if g is not None and n is not None and codim is not None else PUSH_CASES
        for case in cases:
            jobs.append((check_dr_push, case))
            jobs.append((check_dr_push_numeric, case))
    return jobs


def run_suite(suite: str = "all", jobs: int | None = None, **kw) -> list[CheckReport]:
    work = jobs_for(suite, **kw)
    if jobs is None:
        jobs = int(os.environ.get("DRCALC_JOBS", "1") or 1)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_call, work))
    else:
        parts = [_call(j) for j in work]
    reports = [r for part in parts for r in part]
    return sorted(reports, key=CheckReport.sort_key)


def suite_ok(reports: list[CheckReport]) -> bool:
    return all(r.ok or not r.asserted for r in reports)
