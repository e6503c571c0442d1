"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import P
from drcalc.cli.bench import bench_rows, speedup
from drcalc.drinvariant import cg_oracle_poly, cg_top, zagier_value
from drcalc.drinvariant.corpus import base_corpus
from drcalc.exactmath import MultiPoly, regularize_poly_sum
from drcalc.graphcore import (
    StableGraph,
    banana,
    edge_tree,
    enumerate_stable_graphs,
    kirchhoff_count,
    loop_graph,
    spanning_trees,
)
from drcalc.identities import (
    check_aux_lemma,
    check_codim_minus_deg,
    check_corollary_inversion,
    check_dr_push,
    check_dr_push_numeric,
    check_scalar_identities,
    check_topdeg_global,
    check_topdeg_per_graph,
    check_unidr_delta,
)
from drcalc.identities.globalchecks import codim_minus_deg_sides
from drcalc.identities.pergraph import shuffled
from drcalc.graphcore import is_isomorphic


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(name: str):
        t0 = time.perf_counter()
        status, note = "FAIL", ""
        try:
            yield
            status = "PASS"
        except AssertionError as exc:
            note = f"  ({str(exc).splitlines()[0][:160]})" if str(exc) else ""
            raise
        finally:
            with capsys.disabled():
                print(f"\n{status} {name} [{time.perf_counter() - t0:.1f}s]{note}")
    return run


def _failures(reports) -> list[str]:
    return [r.line() for r in reports if not r.ok]


@pytest.mark.slow
def test_oracle_zagier_equivalence(criterion, full_corpus):
    with criterion(f"oracle = zagier(laurent) = zagier(division) on {len(full_corpus)} corpus graphs"):
        for G in full_corpus:
            oracle = cg_oracle_poly(G)[0]
            assert oracle == zagier_value(G, "full", "laurent"), f"laurent differs on {G}"
            assert oracle == zagier_value(G, "full", "division"), f"division differs on {G}"


def test_anchor_values(criterion):
    with criterion("anchors: C(point) = 1, C(loop) = -1/12, C(tree) = -a^2/2, sum k = -1/12"):
        assert zagier_value(StableGraph.smooth(0, 3)) == MultiPoly.one()
        assert zagier_value(loop_graph(0)) == MultiPoly.const(Fraction(-1, 12))
        assert zagier_value(edge_tree((0, 0))) == P("-x0^2/2")
        assert cg_oracle_poly(loop_graph(0))[0] == MultiPoly.const(Fraction(-1, 12))
        assert cg_oracle_poly(edge_tree((0, 0)))[0] == P("-x0^2/2")
        assert regularize_poly_sum(P("k")) == Fraction(-1, 12)


def test_degree_bound_and_top_part(criterion, full_corpus):
    with criterion("deg C(G) <= 2|E| and cg_top = top homogeneous part on the corpus"):
        for G in full_corpus:
            full = zagier_value(G)
            assert full.degree() <= 2 * G.n_edges, str(G)
            assert cg_top(G).value == full.homogeneous_part(2 * G.n_edges), str(G)


def test_scalar_identity_suite(criterion):
    with criterion("scalar identity suite to order 20"):
        reports = check_scalar_identities(20)
        assert reports and not _failures(reports), _failures(reports)


@pytest.mark.slow
def test_per_graph_correspondence(criterion, full_corpus):
    with criterion("check_topdeg_per_graph and check_corollary_inversion on the corpus, both strategies, relabel robust"):
        bad = []
        for G in full_corpus:
            r = check_topdeg_per_graph(G, robust=True)
            if not r.ok:
                bad.append(r.line())
            for H in (G, shuffled(G, seed=1)):
                for s in ("laurent", "division"):
                    r = check_corollary_inversion(H, s)
                    if not r.ok:
                        bad.append(r.line())
        assert not bad, bad


@pytest.mark.slow
def test_aux_lemma(criterion, full_corpus):
    with criterion("check_aux_lemma on the corpus to order 2 in (a_{n+1} - b)"):
        bad = [r.line() for r in (check_aux_lemma(G) for G in full_corpus) if not r.ok]
        assert not bad, bad


@pytest.mark.slow
def test_global_theorems(criterion):
    with criterion("check_topdeg_global and check_codim_minus_deg for (1,1),(1,2),(2,0),(2,1) at c_max = 2"):
        bad = []
        for g, n in [(1, 1), (1, 2), (2, 0), (2, 1)]:
            for r in (check_topdeg_global(g, n, 2), check_codim_minus_deg(g, n, 2)):
                if not r.ok:
                    bad.append(r.line())
        lhs, _ = codim_minus_deg_sides(1, 1, 1)
        loop = [c for s, c in lhs if is_isomorphic(s.graph, loop_graph(0, [1])) and s.codim == 1]
        assert loop == [MultiPoly.const(Fraction(-1, 12))], loop
        assert not bad, bad


@pytest.mark.slow
def test_forgetful_pushforward(criterion):
    with criterion("check_dr_push at (1,1,1),(1,1,2),(2,1,1): (a_{n+1}-b)^2 divisibility and quotient, under 10 min each"):
        bad = []
        for case in [(1, 1, 1), (1, 1, 2), (2, 1, 1)]:
            for check in (check_dr_push, check_dr_push_numeric):
                t0 = time.perf_counter()
                r = check(*case)
                if not r.ok:
                    bad.append(r.line())
                if time.perf_counter() - t0 > 600:
                    bad.append(f"{check.__name__}{case} took over 10 minutes")
        assert not bad, bad


@pytest.mark.slow
def test_unidr_delta_polynomiality(criterion):
    graphs = [G for G in base_corpus(3) if G.n_legs]
    with criterion(f"uniDR delta sweep over [-3,3]^V interpolates with degree <= 2|E| on {len(graphs)} graphs"):
        bad = [r.line() for r in (check_unidr_delta(G, radius=3) for G in graphs) if not r.ok]
        assert not bad, bad


def test_enumeration_censuses(criterion, full_corpus):
    with criterion("census (1,1) -> 2, (2,0) -> 7, (0,3) -> 1; Kirchhoff = spanning tree count on the corpus"):
        assert len(enumerate_stable_graphs(1, 1)) == 2
        assert len(enumerate_stable_graphs(2, 0)) == 7
        assert len(enumerate_stable_graphs(0, 3)) == 1
        for G in full_corpus:
            assert kirchhoff_count(G) == len(spanning_trees(G)), str(G)


def test_bench_speedup(criterion):
    G = banana(3)
    rows = bench_rows([G], repeat=20)
    ratio = speedup(rows, str(G))
    with criterion(f"bench: zagier-laurent beats the oracle on the 3-edge banana by >= 10x (measured {ratio:.1f}x)"):
        assert all(r["agrees"] for r in rows)
        assert {r["method"] for r in rows} == {"oracle", "zagier-laurent", "zagier-division"}
        assert ratio >= 10, f"speedup {ratio:.1f}x"
