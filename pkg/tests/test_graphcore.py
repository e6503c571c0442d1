from __future__ import annotations

from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import multigraphs
from drcalc.graphcore import (
    GraphError,
    StableGraph,
    automorphism_order,
    automorphism_order_bruteforce,
    banana,
    canonical_form,
    cycle_data,
    edge_tree,
    enumerate_stable_graphs,
    enumerate_stable_graphs_direct,
    forget_leg,
    glue_legs,
    h1,
    is_isomorphic,
    kirchhoff_count,
    loop_graph,
    spanning_trees,
    subdivide,
    subdivide_all,
)


def test_first_betti_number():
    assert h1(loop_graph(1)) == 1
    assert h1(edge_tree()) == 0
    assert h1(banana(3)) == 2


def test_spanning_trees_counts():
    assert spanning_trees(edge_tree()) == [(0,)]
    assert len(spanning_trees(banana(2))) == 2
    assert spanning_trees(banana(3)) == [(0,), (1,), (2,)]
    assert spanning_trees(loop_graph(0)) == [()]


def test_cycle_data_of_banana():
    cd = cycle_data(banana(3), (0,))
    assert cd.tree == (0,)
    # each non-tree edge runs out along itself and back along the tree edge
    assert cd.cycles == {1: {1: 1, 0: -1}, 2: {2: 1, 0: -1}}
    assert cd.head_side == {0: frozenset({1})}


def test_subdivide_loop():
    G = subdivide(loop_graph(1), 0, 2)
    assert G.n_vertices == 3 and G.n_edges == 3
    assert h1(G) == 1 and G.genus == 2
    assert G.semistable or not G.is_stable()
    assert subdivide_all(loop_graph(1), [0]) == loop_graph(1)


def test_glue_and_forget_legs():
    T = edge_tree((0, 0), ((1, 2), (3, 4)))
    G = glue_legs(T, 2, 3)
    assert G.n_edges == 2 and G.n_legs == 2 and h1(G) == 1
    assert G.genus == 1
    assert forget_leg(loop_graph(1, [1]), 1) == loop_graph(1)


def test_validate_rejects_unstable():
    with pytest.raises(GraphError):
        StableGraph((0,), ((1,),), ()).validate()
    with pytest.raises(GraphError):
        StableGraph((0, 0), ((), ()), ((0, 1),)).validate()
    assert StableGraph.smooth(2, 0).validate().genus == 2


def test_json_round_trip():
    G = banana(3, (1, 0), ((1,), (2,)))
    assert StableGraph.from_json(G.to_json()) == G
    with pytest.raises(GraphError):
        StableGraph.from_json({"schema": 1, "vertices": [{"genus": 0, "legs": []}], "edges": [{"tail": 0, "head": 5}]})


@pytest.mark.parametrize("G,order", [
    (loop_graph(1), 2),
    (loop_graph(0, [1]), 2),
    (banana(3), 12),
    (banana(2), 4),
    (edge_tree((1, 1)), 2),
    (edge_tree((1, 2)), 1),
    (StableGraph.smooth(2, 0), 1),
])
def test_automorphism_orders(G, order):
    assert automorphism_order(G) == order
    assert automorphism_order_bruteforce(G) == order


@pytest.mark.parametrize("g,n,count", [(0, 3, 1), (0, 4, 4), (1, 1, 2), (1, 2, 5), (2, 0, 7)])
def test_stable_graph_census(g, n, count):
    graphs = enumerate_stable_graphs(g, n)
    assert len(graphs) == count
    assert all(G.is_stable() and G.genus == g for G in graphs)
    keys = {canonical_form(G) for G in graphs}
    assert len(keys) == count


@pytest.mark.parametrize("g,n", [(0, 5), (1, 2), (1, 3), (2, 0), (2, 1)])
def test_enumeration_routes_agree(g, n):
    a = enumerate_stable_graphs(g, n)
    b = enumerate_stable_graphs_direct(g, n)
    assert len(a) == len(b)
    assert {canonical_form(G) for G in a} == {canonical_form(G) for G in b}


def test_max_edges_truncates():
    assert [G.n_edges for G in enumerate_stable_graphs(2, 0, 1)] == [0, 1, 1]


# random connected multigraphs ---------------------------------------------

@settings(max_examples=60, deadline=None)
@given(multigraphs())
def test_kirchhoff_matches_tree_enumeration(G):
    trees = spanning_trees(G)
    assert kirchhoff_count(G) == len(trees)
    assert all(len(t) == G.n_vertices - 1 for t in trees)
    assert h1(G) == G.n_edges - G.n_vertices + 1


@settings(max_examples=60, deadline=None)
@given(multigraphs(), st.data())
def test_canonical_form_ignores_labels(G, data):
    perm = data.draw(st.permutations(range(G.n_vertices)))
    order = data.draw(st.permutations(range(G.n_edges)))
    H = G.relabel_vertices(perm).permute_edges(order)
    if G.n_edges:
        H = H.flip_edge(data.draw(st.integers(0, G.n_edges - 1)))
    assert canonical_form(G) == canonical_form(H)
    assert is_isomorphic(G, H)
    assert automorphism_order(G) == automorphism_order(H)


@settings(max_examples=30, deadline=None)
@given(multigraphs(max_vertices=3, max_extra=2))
def test_automorphism_routes_agree(G):
    assert automorphism_order(G) == automorphism_order_bruteforce(G)


def test_marking_relabel_changes_class():
    G = edge_tree((0, 1), ((1, 2), (3,)))
    H = G.relabel_markings({1: 3, 2: 2, 3: 1})
    assert not is_isomorphic(G, H)
    assert is_isomorphic(G, G.relabel_markings({1: 2, 2: 1, 3: 3}))


def test_small_permutation_check_of_banana():
    G = banana(3)
    for order in permutations(range(3)):
        assert is_isomorphic(G, G.permute_edges(order))
