from __future__ import annotations

import pytest
from hypothesis import strategies as st

from drcalc.drinvariant.corpus import base_corpus, corpus
from drcalc.exactmath import MultiPoly
from drcalc.graphcore import StableGraph


def P(text: str) -> MultiPoly:
    return MultiPoly.parse(text)


@pytest.fixture(scope="session")
def full_corpus():
    return corpus()


@pytest.fixture(scope="session")
def small_corpus():
    """Base graphs with at most two edges; quick enough for per-test sweeps."""
    return base_corpus(2)


@st.composite
def multigraphs(draw, max_vertices=4, max_extra=3):
    nv = draw(st.integers(1, max_vertices))
    edges = []
    for v in range(1, nv):
        edges.append((draw(st.integers(0, v - 1)), v))
    for _ in range(draw(st.integers(0, max_extra))):
        edges.append((draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1))))
    genera = tuple(draw(st.integers(0, 1)) for _ in range(nv))
    legs = [[] for _ in range(nv)]
    for i in range(1, draw(st.integers(0, 2)) + 1):
        legs[draw(st.integers(0, nv - 1))].append(i)
    order = draw(st.permutations(range(len(edges))))
    edges = [edges[i] for i in order]
    return StableGraph(genera, tuple(tuple(l) for l in legs), tuple(edges), semistable=True)
