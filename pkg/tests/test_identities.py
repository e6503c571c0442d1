from __future__ import annotations

from fractions import Fraction

import pytest

from drcalc.drclass import FineStratum
from drcalc.graphcore import StableGraph, banana, edge_tree, is_isomorphic, loop_graph
from drcalc.identities import (
    CheckReport,
    check_aux_lemma,
    check_codim_minus_deg,
    check_corollary_inversion,
    check_dr_push,
    check_dr_push_numeric,
    check_qbar,
    check_scalar_identities,
    check_topdeg_global,
    check_topdeg_per_graph,
    check_unidr_delta,
    orbit_count,
    orbit_formula,
    run_suite,
    suite_ok,
    twisted_spec,
)
from drcalc.identities.globalchecks import codim_minus_deg_sides


def _all_pass(reports):
    bad = [r.line() for r in reports if not r.ok]
    assert not bad, bad


def test_scalar_identities_low_order():
    _all_pass(check_scalar_identities(8))


def test_qbar_series():
    _all_pass(check_qbar(4))


SMALL = [
    loop_graph(0, [1]),
    edge_tree((1, 0), ((), (1, 2))),
    banana(2, (0, 0), ((1,), (2,))),
    banana(3),
    StableGraph((0, 0), ((1,), ()), ((0, 0), (0, 1), (1, 1))),
]


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_per_graph_checks(G):
    assert check_topdeg_per_graph(G).ok
    for s in ("laurent", "division"):
        assert check_corollary_inversion(G, s).ok
    assert check_aux_lemma(G).ok


def test_unidr_delta_polynomiality():
    r = check_unidr_delta(banana(2, (0, 0), ((1,), (2,))), radius=2, extra=4)
    assert r.ok, r.line()


def test_codim_minus_deg_loop_entry():
    lhs, rhs = codim_minus_deg_sides(1, 1, 1)
    loop = loop_graph(0, [1])

    def loop_entry(table):
        hits = [c for s, c in table if is_isomorphic(s.graph, loop) and s.codim == 1]
        assert len(hits) == 1
        return hits[0].constant_term()

    assert loop_entry(lhs) == Fraction(-1, 12)
    assert loop_entry(rhs) == Fraction(-1, 12)
    assert check_codim_minus_deg(1, 1, 1).ok


@pytest.mark.parametrize("g,n", [(1, 1), (1, 2)])
def test_global_theorems_codim_one(g, n):
    assert check_topdeg_global(g, n, 1).ok
    assert check_codim_minus_deg(g, n, 1).ok


def test_pushforward_checks():
    assert check_dr_push(1, 1, 1).ok
    assert check_dr_push_numeric(1, 1, 1).ok


@pytest.mark.parametrize("G2,n,m,count", [
    (StableGraph.smooth(0, 3), 1, 1, 1),
    (StableGraph.smooth(0, 4), 2, 1, 1),
    (edge_tree((0, 0), ((1, 2), (3, 4))), 2, 1, 1),
    (edge_tree((0, 0), ((1, 3), (2, 4))), 2, 1, 2),
    (StableGraph.smooth(0, 5), 1, 2, 1),
    (edge_tree((0, 0), ((1, 2, 3), (4, 5))), 1, 2, 2),
])
def test_orbit_formula_matches_direct_count(G2, n, m, count):
    assert orbit_count(G2, n, m) == count
    assert orbit_formula(G2, n, m) == count


def test_twisted_spec_charges():
    spec = twisted_spec(1, 1, 2)
    assert [str(spec.a[i]) for i in range(2, 6)] == ["k1", "-k1", "k2", "-k2"]


def test_report_requires_witness_on_failure():
    with pytest.raises(ValueError):
        CheckReport("x", {}, "fail")
    with pytest.raises(ValueError):
        CheckReport("x", {}, "maybe")
    info = CheckReport("x", {"g": 1}, "fail", "lhs=1 rhs=2", asserted=False)
    assert suite_ok([info, CheckReport("y", {}, "pass")])
    assert not suite_ok([CheckReport("z", {}, "fail", "w")])
    assert info.line().startswith("FAIL x(g=1)")
    assert info.to_json()["asserted"] is False


def test_run_suite_rejects_unknown_name():
    with pytest.raises(ValueError):
        run_suite("nope")


def test_fine_stratum_shape_is_checked():
    with pytest.raises(ValueError):
        FineStratum(loop_graph(0, [1]), (0,), (0,), ((),))
