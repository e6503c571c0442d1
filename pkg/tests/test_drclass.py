from __future__ import annotations

import json
from fractions import Fraction

import pytest

from conftest import P
from drcalc.drclass import (
    BudgetError,
    DecoratedStratum,
    DivisorMonomial,
    DRTable,
    FineStratum,
    FineTable,
    apply_drd,
    assemble_dr,
    extract_coefficient,
    forget_pushforward,
    glue_fine,
    push_forget_last,
    push_table,
    specialize_table,
)
from drcalc.exactmath import MultiPoly
from drcalc.graphcore import StableGraph, edge_tree, loop_graph


def _by_text(table: DRTable) -> dict[str, MultiPoly]:
    return {s.describe(): c for s, c in table}


def test_genus_zero_three_points():
    t = assemble_dr(0, 3, 0)
    assert _by_text(t) == {str(StableGraph.smooth(0, 3)): MultiPoly.one()}


def test_genus_one_one_point_codim_one():
    got = _by_text(assemble_dr(1, 1, 1))
    smooth = str(StableGraph.smooth(1, 1))
    assert got == {
        smooth: MultiPoly.one(),
        str(loop_graph(0, [1])): MultiPoly.const(Fraction(-1, 24)),
        smooth + " psi1^1": P("b^2/2"),
        smooth + " kappa1^1": P("-b^2/2"),
    }


def test_extract_coefficient():
    t = assemble_dr(1, 1, 1)
    vals = {s.describe(): x for s, x in extract_coefficient(t, "b^2", 1).items()}
    smooth = str(StableGraph.smooth(1, 1))
    assert vals[smooth + " psi1^1"] == Fraction(1, 2)
    assert vals[smooth + " kappa1^1"] == Fraction(-1, 2)
    assert vals[str(loop_graph(0, [1]))] == 0
    assert all(x == 0 for x in extract_coefficient(t, "b^4", 1).values())
    assert extract_coefficient(t, {}, 1)[DecoratedStratum(loop_graph(0, [1]), (0,), DivisorMonomial(0, (0,)))] == Fraction(-1, 24)
    with pytest.raises(ValueError):
        extract_coefficient(t, "a1^2", 1)
    with pytest.raises(ValueError):
        extract_coefficient(t, "b^2", 2)
    with pytest.raises(ValueError):
        extract_coefficient(t, "c", 1)
    with pytest.raises(ValueError):
        extract_coefficient(t, "b + 1", 1)


def test_relation_eliminates_a1():
    t = assemble_dr(1, 2, 1)
    assert t.relation is not None
    for _, c in t:
        assert "a1" not in c.used_vars()


@pytest.mark.parametrize("g,n,c", [(1, 1, 2), (1, 2, 2), (2, 0, 2), (0, 4, 1)])
def test_drd_reproduces_full_table(g, n, c):
    full = assemble_dr(g, n, c)
    pp = assemble_dr(g, n, c, drd=False)
    assert all(s.divisor.codim == 0 for s, _ in pp)
    again = apply_drd(pp)
    assert _by_text(again) == _by_text(full)


@pytest.mark.parametrize("g,n,c", [(1, 1, 2), (1, 2, 2), (2, 1, 2)])
def test_top_is_degree_filtered_full(g, n, c):
    full = assemble_dr(g, n, c)
    top = assemble_dr(g, n, c, flavor="top")
    want = {s.describe(): p.homogeneous_part(2 * s.codim) for s, p in full}
    want = {k: v for k, v in want.items() if not v.is_zero()}
    assert _by_text(top) == want


def test_json_round_trip_is_deterministic():
    t = assemble_dr(1, 2, 2)
    text = json.dumps(t.to_json(), sort_keys=True)
    back = DRTable.from_json(json.loads(text))
    assert json.dumps(back.to_json(), sort_keys=True) == text
    assert json.dumps(assemble_dr(1, 2, 2).to_json(), sort_keys=True) == text
    with pytest.raises(ValueError):
        DRTable.from_json({"kind": "other"})


def test_budget_and_argument_checks():
    with pytest.raises(BudgetError):
        assemble_dr(2, 1, 3, budget=5)
    with pytest.raises(ValueError):
        assemble_dr(1, 1, 1, flavor="other")
    with pytest.raises(ValueError):
        assemble_dr(1, 1, -1)


def test_edge_psi_expands_to_fine_basis():
    s = DecoratedStratum(loop_graph(0, [1]), (1,), DivisorMonomial(0, (0,)))
    fine = s.to_fine()
    assert sorted(f.hpsi for f, _ in fine) == [(0, 1), (1, 0)]
    assert all(x == Fraction(-1, 2) for _, x in fine)


# fine basis and pushforward ----------------------------------------------------

def _fine(G, hpsi=None, lpsi=None, kappa=None):
    return FineStratum(
        G,
        tuple(hpsi or (0,) * (2 * G.n_edges)),
        tuple(lpsi or (0,) * G.n_legs),
        tuple(kappa or ((),) * G.n_vertices),
    )


def test_string_and_dilaton_pushforwards():
    M04 = StableGraph.smooth(0, 4)
    M03 = StableGraph.smooth(0, 3)
    # string: psi_1 on M_{0,4} pushes to the fundamental class
    assert push_forget_last(_fine(M04, lpsi=(1, 0, 0, 0))) == [(_fine(M03), 1)]
    # dilaton: psi_2 on M_{1,2} pushes to (2g - 2 + n) = 1
    assert push_forget_last(_fine(StableGraph.smooth(1, 2), lpsi=(0, 1))) == [(_fine(StableGraph.smooth(1, 1)), 1)]
    # psi_4^2 pushes to kappa_1
    assert push_forget_last(_fine(M04, lpsi=(0, 0, 0, 2))) == [(_fine(M03, kappa=((1,),)), 1)]
    # the fundamental class pushes to zero
    assert push_forget_last(_fine(M04)) == []


def test_contracted_boundary_pushforward():
    T = edge_tree((1, 0), ((1,), (2, 3)))
    out = push_forget_last(_fine(T))
    assert out == [(_fine(StableGraph((1,), ((1, 2),), ())), 1)]
    assert push_forget_last(_fine(T, lpsi=(0, 1, 0))) == []


def test_genus_zero_dr_pushes_to_zero():
    assert len(forget_pushforward(assemble_dr(0, 4, 1))) == 0
    assert len(forget_pushforward(assemble_dr(0, 4, 1), {"b": 0, "a1": 1, "a2": -1, "a3": 2, "a4": -2})) == 0


def test_numeric_pushforward_matches_symbolic():
    t = assemble_dr(1, 2, 2)
    sym = forget_pushforward(t)
    vals = {"b": Fraction(1), "a2": Fraction(3)}
    num = forget_pushforward(t, {"b": 1, "a1": -1, "a2": 3})
    want = FineTable((s, c.subs(vals).trim()) for s, c in sym)
    assert num.first_difference(want) is None
    with pytest.raises(ValueError):
        specialize_table(t, 1, [1, 3])


def test_glue_fine_moves_leg_psi_to_edge():
    s = _fine(StableGraph.smooth(0, 4), lpsi=(2, 0, 1, 0))
    glued = glue_fine(s, 3, 4)
    assert glued.graph == loop_graph(0, [1, 2])
    assert glued.hpsi == (1, 0) and glued.lpsi == (2, 0)
    assert push_table(FineTable([(s, MultiPoly.one())])).is_zero() is False
