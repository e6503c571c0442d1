from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, multigraphs
from drcalc.drinvariant import (
    GraphInvariant,
    InvariantCache,
    SpecializationData,
    ZagierError,
    cg_oracle_poly,
    cg_top,
    cg_zagier,
    dr_coeff,
    specialize,
    vertex_charges,
    weighting_sum,
    zagier_value,
)
from drcalc.drinvariant.oracle import charge_vars
from drcalc.exactmath import MultiPoly
from drcalc.graphcore import StableGraph, banana, edge_tree, loop_graph


# independent brute-force oracle -------------------------------------------

def _brute_sum(G: StableGraph, charges, r: int) -> Fraction:
    """r^-h1 * sum over admissible weightings of prod_e w_e (r - w_e) / 2."""
    total = Fraction(0)
    for w in product(range(r), repeat=G.n_edges):
        flow = [0] * G.n_vertices
        for (t, h), x in zip(G.edges, w):
            flow[t] += x
            flow[h] -= x
        if all((flow[v] - charges[v]) % r == 0 for v in range(G.n_vertices)):
            term = Fraction(1)
            for x in w:
                term *= Fraction(x * (r - x), 2)
            total += term
    h1 = G.n_edges - G.n_vertices + 1
    return total / r ** h1


def _value_at_zero(xs, ys) -> Fraction:
    out = Fraction(0)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        w = Fraction(yi)
        for j, xj in enumerate(xs):
            if j != i:
                w *= Fraction(-xj, xi - xj)
        out += w
    return out


def brute_constant(G: StableGraph, charges) -> Fraction:
    deg = 2 * G.n_edges
    lo = 2 * max(abs(c) for c in charges) + 3
    a = _value_at_zero(list(range(lo, lo + deg + 1)), [_brute_sum(G, charges, r) for r in range(lo, lo + deg + 1)])
    b = _value_at_zero(list(range(lo + 1, lo + deg + 2)), [_brute_sum(G, charges, r) for r in range(lo + 1, lo + deg + 2)])
    assert a == b, "weighting sum is not polynomial in r on this range"
    return a


def _at(value: MultiPoly, charges) -> Fraction:
    names = charge_vars(len(charges))
    return value.evaluate({names[v]: charges[v] for v in range(len(charges))})


# anchors -------------------------------------------------------------------

def test_weighting_sum_anchors():
    assert weighting_sum(loop_graph(0), [0], 5) == 2
    assert weighting_sum(edge_tree((0, 0)), [1, -1], 7) == 3
    assert weighting_sum(edge_tree((0, 0)), [0, 0], 7) == 0


@pytest.mark.parametrize("G,charges,r", [
    (loop_graph(0), [0], 5),
    (edge_tree((0, 0)), [2, -2], 9),
    (banana(2), [1, -1], 7),
    (banana(3), [3, -3], 8),
])
def test_weighting_sum_matches_brute_force(G, charges, r):
    assert weighting_sum(G, charges, r) == _brute_sum(G, charges, r)


def test_small_values():
    assert zagier_value(StableGraph.smooth(0, 3)) == MultiPoly.one()
    assert zagier_value(loop_graph(0)) == MultiPoly.const(Fraction(-1, 12))
    assert zagier_value(edge_tree((0, 0))) == P("-x0^2/2")
    assert zagier_value(loop_graph(0), "top").is_zero()
    assert zagier_value(banana(2)) == P("-x0^4/24 + x0^2/12 - 1/120")
    assert zagier_value(banana(2), "top") == P("-x0^4/24")


@pytest.mark.parametrize("G,charges", [
    (loop_graph(0), [0]),
    (edge_tree((0, 0)), [3, -3]),
    (banana(2), [1, -1]),
    (banana(2), [2, -2]),
    (banana(3), [1, -1]),
    (StableGraph((0, 0, 0), ((), (), ()), ((0, 1), (1, 2), (2, 0))), [1, 2, -3]),
    (StableGraph((0, 0), ((), ()), ((0, 0), (0, 1))), [2, -2]),
])
def test_tree_sum_matches_brute_force(G, charges):
    want = brute_constant(G, charges)
    assert _at(zagier_value(G), charges) == want
    assert _at(cg_oracle_poly(G)[0], charges) == want


def test_oracle_and_tree_sum_agree_on_small_corpus(small_corpus):
    for G in small_corpus:
        assert cg_oracle_poly(G)[0] == zagier_value(G), str(G)


def test_strategies_agree_on_corpus(full_corpus):
    for G in full_corpus:
        for kind in ("full", "top", "rhs"):
            a = zagier_value(G, kind, "laurent")
            assert a == zagier_value(G, kind, "laurent-series"), (str(G), kind)
            assert a == zagier_value(G, kind, "division"), (str(G), kind)


def test_top_part_is_leading_homogeneous_part(small_corpus):
    for G in small_corpus:
        full = zagier_value(G)
        top = cg_top(G).value
        assert top == full.homogeneous_part(2 * G.n_edges)
        assert full.degree() <= 2 * G.n_edges


def test_unknown_strategy_and_disconnected_graph():
    with pytest.raises((ValueError, ZagierError)):
        zagier_value(banana(2), "full", "nonsense")
    with pytest.raises((ValueError, ZagierError)):
        zagier_value(StableGraph((1, 1), ((), ()), ()))


# label invariance ------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(multigraphs(max_vertices=3, max_extra=2), st.data())
def test_invariant_under_orientation_and_edge_order(G, data):
    base = zagier_value(G)
    order = data.draw(st.permutations(range(G.n_edges)))
    H = G.permute_edges(order)
    if G.n_edges:
        H = H.flip_edge(data.draw(st.integers(0, G.n_edges - 1)))
    assert zagier_value(H) == base
    assert base.degree() <= 2 * G.n_edges


@settings(max_examples=25, deadline=None)
@given(multigraphs(max_vertices=3, max_extra=2), st.data())
def test_cache_transports_vertex_relabeling(G, data):
    cache = InvariantCache()
    perm = data.draw(st.permutations(range(G.n_vertices)))
    H = G.relabel_vertices(perm)
    first = cg_zagier(G, cache=cache).value
    second = cg_zagier(H, cache=cache).value
    assert first == zagier_value(G)
    assert second == zagier_value(H)
    assert cache.misses == 1 and cache.hits == 1


# specialization ----------------------------------------------------------------

def test_vertex_charges_and_specialize_with_delta():
    G = edge_tree((1, 1), ((1,), (2,)))
    sym = SpecializationData.symbolic(2, 2)
    assert vertex_charges(G, sym) == [P("2*b - a2"), P("a2 - 2*b")]
    inv = GraphInvariant(G, zagier_value(G), "zagier-laurent")
    assert specialize(inv, sym) == P("-(2*b - a2)^2/2")
    num = SpecializationData.numeric(1, [3, 1], {0: -1, 1: 1})
    assert specialize(inv, num) == MultiPoly.const(-2)
    with pytest.raises(ValueError):
        vertex_charges(G, SpecializationData.numeric(1, [3, 2]))


@pytest.mark.parametrize("G,g,n,psi", [
    (loop_graph(0, [1]), 1, 1, [0]),
    (loop_graph(0, [1]), 1, 1, [1]),
    (edge_tree((1, 0), ((), (1, 2))), 1, 2, [2]),
    (banana(2, (0, 0), ((1,), (2,))), 1, 2, [1, 0]),
    (banana(3), 2, 0, [0, 1, 0]),
])
def test_dr_coeff_routes_agree(G, g, n, psi):
    spec = SpecializationData.symbolic(g, n)
    for kind in ("full", "top"):
        assert dr_coeff(G, psi, spec, route="direct", kind=kind) == dr_coeff(G, psi, spec, route="generic", kind=kind)
    with pytest.raises(ValueError):
        dr_coeff(G, psi, spec, route="other")
