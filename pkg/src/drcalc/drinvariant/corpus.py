"""The desk-scale graph corpus used by the equivalence and identity checks."""

from __future__ import annotations

from ..graphcore import StableGraph, canonical_form, enumerate_stable_graphs, subdivide

CORPUS_GN = [(g, n) for g in range(3) for n in range(3) if 2 * g - 2 + n > 0]


def base_corpus(max_edges: int = 3) -> list[StableGraph]:
    """Stable graphs with g <= 2, n <= 2 and at most max_edges edges."""
    out = []
    for g, n in CORPUS_GN:
        out.extend(enumerate_stable_graphs(g, n, max_edges))
    return out


def corpus(max_edges: int = 3, subdivisions: bool = True) -> list[StableGraph]:
    """Base corpus plus every single-edge subdivision, deduplicated."""
    seen = {}
    for G in base_corpus(max_edges):
        seen.setdefault(canonical_form(G), G)
        if subdivisions:
            for e in range(G.n_edges):
                H = subdivide(G, e, 1)
                seen.setdefault(canonical_form(H), H)
    return list(seen.values())
