"""Stable graphs: construction, isomorphism, automorphisms, trees and cycles.

Edge ``i`` is the ordered pair (tail, head) of vertex indices; its two
half-edges are numbered ``2i`` (tail side) and ``2i+1`` (head side).  The
edge order doubles as the series-variable order in the Zagier evaluator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Hashable, Iterable, Iterator, Sequence

SCHEMA_VERSION = 1
DEFAULT_VERTEX_BOUND = 8


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class StableGraph:
    genera: tuple[int, ...]
    legs: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...] = ()
    semistable: bool = False
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "genera", tuple(int(g) for g in self.genera))
        object.__setattr__(self, "legs", tuple(tuple(sorted(int(i) for i in l)) for l in self.legs))
        object.__setattr__(self, "edges", tuple((int(t), int(h)) for t, h in self.edges))
        nv = len(self.genera)
        if nv == 0:
            raise GraphError("a graph needs at least one vertex")
        if len(self.legs) != nv:
            raise GraphError("one leg list per vertex required")
        if any(g < 0 for g in self.genera):
            raise GraphError("negative genus")
        for t, h in self.edges:
            if not (0 <= t < nv and 0 <= h < nv):
                raise GraphError("edge endpoint out of range")
        marks = sorted(i for l in self.legs for i in l)
        if marks != list(range(1, len(marks) + 1)):
            raise GraphError(f"markings must be 1..n exactly once, got {marks}")

    # basic data -----------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_legs(self) -> int:
        return sum(len(l) for l in self.legs)

    def degree(self, v: int) -> int:
        """Number of incident half-edges (loops count twice)."""
        return sum((t == v) + (h == v) for t, h in self.edges)

    def valence(self, v: int) -> int:
        return self.degree(v) + len(self.legs[v])

    def leg_vertex(self, i: int) -> int:
        for v, l in enumerate(self.legs):
            if i in l:
                return v
        raise GraphError(f"no leg {i}")

    def halfedge_vertex(self, h: int) -> int:
        t, hd = self.edges[h // 2]
        return hd if h % 2 else t

    def halfedges_at(self, v: int) -> list[int]:
        out = []
        for i, (t, h) in enumerate(self.edges):
            if t == v:
                out.append(2 * i)
            if h == v:
                out.append(2 * i + 1)
        return out

    def is_connected(self) -> bool:
        nv = self.n_vertices
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == nv

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.genera]
        for t, h in self.edges:
            adj[t].append(h)
            adj[h].append(t)
        return adj

    @property
    def genus(self) -> int:
        return sum(self.genera) + h1(self)

    def vertex_is_stable(self, v: int) -> bool:
        return 2 * self.genera[v] - 2 + self.valence(v) > 0

    def is_stable(self) -> bool:
        return all(self.vertex_is_stable(v) for v in range(self.n_vertices))

    def validate(self) -> "StableGraph":
        if not self.is_connected():
            raise GraphError("graph is disconnected")
        for v in range(self.n_vertices):
            if self.vertex_is_stable(v):
                continue
            if self.semistable and self.genera[v] == 0 and not self.legs[v] and self.degree(v) == 2:
                continue
            raise GraphError(f"vertex {v} is unstable")
        return self

    # constructors ------------------------------------------------------------
    @classmethod
    def smooth(cls, g: int, n: int) -> "StableGraph":
        return cls((g,), (tuple(range(1, n + 1)),))

    def relabel_vertices(self, perm: Sequence[int]) -> "StableGraph":
        """Vertex v becomes perm[v]."""
        nv = self.n_vertices
        genera = [0] * nv
        legs: list[tuple[int, ...]] = [()] * nv
        for v in range(nv):
            genera[perm[v]] = self.genera[v]
            legs[perm[v]] = self.legs[v]
        edges = tuple((perm[t], perm[h]) for t, h in self.edges)
        return StableGraph(tuple(genera), tuple(legs), edges, self.semistable)

    def permute_edges(self, order: Sequence[int]) -> "StableGraph":
        """New edge j is old edge order[j]."""
        return StableGraph(self.genera, self.legs, tuple(self.edges[i] for i in order), self.semistable)

    def flip_edge(self, i: int) -> "StableGraph":
        edges = list(self.edges)
        t, h = edges[i]
        edges[i] = (h, t)
        return StableGraph(self.genera, self.legs, tuple(edges), self.semistable)

    def relabel_markings(self, mapping: dict[int, int]) -> "StableGraph":
        legs = tuple(tuple(mapping[i] for i in l) for l in self.legs)
        return StableGraph(self.genera, legs, self.edges, self.semistable)

    # JSON ----------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "vertices": [{"genus": g, "legs": list(l)} for g, l in zip(self.genera, self.legs)],
            "edges": [{"tail": t, "head": h} for t, h in self.edges],
            "semistable": self.semistable,
        }

    @classmethod
    def from_json(cls, data) -> "StableGraph":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            genera = [v["genus"] for v in data["vertices"]]
            legs = [v.get("legs", []) for v in data["vertices"]]
            edges = [(e["tail"], e["head"]) for e in data.get("edges", [])]
            semi = bool(data.get("semistable", False))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        return cls(tuple(genera), tuple(tuple(l) for l in legs), tuple(edges), semi)

    def __str__(self) -> str:
        vs = ", ".join(f"v{v}(g={g}{', legs=' + str(list(l)) if l else ''})" for v, (g, l) in enumerate(zip(self.genera, self.legs)))
        es = ", ".join(f"{t}->{h}" for t, h in self.edges)
        return f"[{vs}; {es}]"


def h1(G: StableGraph) -> int:
    if not G.is_connected():
        raise GraphError("h1 needs a connected graph")
    return G.n_edges - G.n_vertices + 1


# spanning trees and cycles ----------------------------------------------------

class _DSU:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def spanning_trees(G: StableGraph) -> list[tuple[int, ...]]:
    """Every spanning tree, as a sorted tuple of edge indices."""
    if not G.is_connected():
        raise GraphError("spanning trees need a connected graph")
    key = "trees"
    if key in G._cache:
        return G._cache[key]
    nv = G.n_vertices
    candidates = [i for i, (t, h) in enumerate(G.edges) if t != h]
    out = []
    for sub in combinations(candidates, nv - 1):
        d = _DSU(nv)
        if all(d.union(*G.edges[i]) for i in sub):
            out.append(sub)
    G._cache[key] = out
    return out


def kirchhoff_count(G: StableGraph) -> int:
    """Matrix-tree theorem: determinant of a reduced Laplacian."""
    nv = G.n_vertices
    if nv == 1:
        return 1
    L = [[Fraction(0)] * nv for _ in range(nv)]
    for t, h in G.edges:
        if t == h:
            continue
        L[t][t] += 1
        L[h][h] += 1
        L[t][h] -= 1
        L[h][t] -= 1
    M = [row[1:] for row in L[1:]]
    n = nv - 1
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return int(det)


@dataclass(frozen=True)
class CycleData:
    tree: tuple[int, ...]
    # non-tree edge -> {edge: sign} describing z_{e,T}
    cycles: dict[int, dict[int, int]]
    # tree edge -> vertices of the component of T - e containing its head
    head_side: dict[int, frozenset[int]]


def _tree_path(G: StableGraph, tree: Sequence[int], start: int, goal: int) -> list[tuple[int, int]]:
    """Edges (index, sign) along the tree path start -> goal; sign +1 when traversed tail->head."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(G.n_vertices)}
    for i in tree:
        t, h = G.edges[i]
        adj[t].append((h, i))
        adj[h].append((t, i))
    prev: dict[int, tuple[int, int] | None] = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == goal:
            break
        for w, i in adj[v]:
            if w not in prev:
                prev[w] = (v, i)
                stack.append(w)
    path = []
    v = goal
    while prev[v] is not None:
        u, i = prev[v]
        path.append((i, 1 if G.edges[i] == (u, v) and u != v else -1))
        v = u
    path.reverse()
    return path


def cycle_data(G: StableGraph, tree: Sequence[int]) -> CycleData:
    tree = tuple(sorted(tree))
    tset = set(tree)
    cycles = {}
    for e, (t, h) in enumerate(G.edges):
        if e in tset:
            continue
        form = {e: 1}
        # go along e from tail to head, then back through the tree
        for f, s in _tree_path(G, tree, h, t):
            form[f] = form.get(f, 0) + s
        cycles[e] = {f: s for f, s in form.items() if s}
    head_side = {}
    for e in tree:
        rest = [i for i in tree if i != e]
        d = _DSU(G.n_vertices)
        for i in rest:
            d.union(*G.edges[i])
        root = d.find(G.edges[e][1])
        head_side[e] = frozenset(v for v in range(G.n_vertices) if d.find(v) == root)
    return CycleData(tree, cycles, head_side)


# surgery --------------------------------------------------------------------------

def subdivide(G: StableGraph, e: int, d: int) -> StableGraph:
    """Replace edge e by a chain of d+1 edges through d new genus-0 vertices.

    The chain occupies the position of e in the edge order, oriented like e.
    """
    if not 0 <= e < G.n_edges:
        raise GraphError(f"no edge {e}")
    if d < 0:
        raise GraphError("negative subdivision count")
    if d == 0:
        return G
    t, h = G.edges[e]
    nv = G.n_vertices
    chain_vertices = [t] + list(range(nv, nv + d)) + [h]
    chain = [(chain_vertices[k], chain_vertices[k + 1]) for k in range(d + 1)]
    edges = G.edges[:e] + tuple(chain) + G.edges[e + 1:]
    return StableGraph(G.genera + (0,) * d, G.legs + ((),) * d, edges, True)


def subdivide_all(G: StableGraph, counts: Sequence[int]) -> StableGraph:
    """Subdivide each edge i by counts[i], keeping chains in edge order."""
    out = G
    offset = 0
    for i, d in enumerate(counts):
        out = subdivide(out, i + offset, d)
        offset += d
    return out


def _compact(legs: Iterable[Iterable[int]]) -> tuple[tuple[tuple[int, ...], ...], dict[int, int]]:
    legs = [tuple(l) for l in legs]
    marks = sorted(i for l in legs for i in l)
    mapping = {m: k + 1 for k, m in enumerate(marks)}
    return tuple(tuple(mapping[i] for i in l) for l in legs), mapping


def glue_legs(G: StableGraph, i: int, j: int) -> StableGraph:
    """Join the carriers of legs i and j by a new last edge (tail at i).

    Remaining markings are renumbered 1..n-2 preserving their order.
    """
    if i == j:
        raise GraphError("cannot glue a leg to itself")
    vi, vj = G.leg_vertex(i), G.leg_vertex(j)
    legs = [tuple(m for m in l if m not in (i, j)) for l in G.legs]
    legs, _ = _compact(legs)
    return StableGraph(G.genera, legs, G.edges + ((vi, vj),), G.semistable)


def forget_leg(G: StableGraph, i: int) -> StableGraph:
    """Remove leg i and renumber; the result may be unstable."""
    G.leg_vertex(i)
    legs = [tuple(m for m in l if m != i) for l in G.legs]
    legs, _ = _compact(legs)
    return StableGraph(G.genera, legs, G.edges, G.semistable)


# isomorphism -------------------------------------------------------------------

def _vertex_classes(labels: Sequence[Hashable], edges: Sequence[tuple]) -> list[tuple]:
    """Isomorphism-invariant refinement key per vertex (labels + local edge data)."""
    nv = len(labels)
    local: list[list] = [[] for _ in range(nv)]
    for e in edges:
        u, v = e[0], e[1]
        du, dv = e[2:4] if len(e) > 2 else (None, None)
        if u == v:
            local[u].append(("loop", tuple(sorted((repr(du), repr(dv))))))
        else:
            local[u].append(("out", repr(du), repr(dv)))
            local[v].append(("out", repr(dv), repr(du)))
    return [(repr(labels[v]), tuple(sorted(local[v]))) for v in range(nv)]


def canonical_key(labels: Sequence[Hashable], edges: Sequence[tuple], bound: int = DEFAULT_VERTEX_BOUND, extra: Hashable = None):
    """Minimal encoding over vertex relabelings; returns (key, perm).

    ``labels`` holds sortable per-vertex data, ``edges`` holds tuples
    (u, v) or (u, v, du, dv) where du/dv decorate the two ends.  The
    permutation maps old vertex -> new index.
    """
    nv = len(labels)
    if nv > bound:
        raise GraphError(f"{nv} vertices exceed the search bound {bound}")
    classes = _vertex_classes(labels, edges)
    order = sorted(set(classes))
    groups = [[v for v in range(nv) if classes[v] == c] for c in order]
    best = None
    best_perm = None
    decorated = any(len(e) > 2 for e in edges)
    for choice in product(*(permutations(g) for g in groups)):
        perm = [0] * nv
        k = 0
        for grp in choice:
            for v in grp:
                perm[v] = k
                k += 1
        enc = []
        for e in edges:
            u, v = perm[e[0]], perm[e[1]]
            if decorated:
                du, dv = e[2], e[3]
                a, b = (u, du), (v, dv)
                if (a[0], repr(a[1])) > (b[0], repr(b[1])):
                    a, b = b, a
                enc.append((a[0], b[0], a[1], b[1]))
            else:
                enc.append((min(u, v), max(u, v)))
        enc.sort(key=repr)
        lab = [None] * nv
        for v in range(nv):
            lab[perm[v]] = labels[v]
        key = (tuple(lab), tuple(enc))
        rk = repr(key)
        if best is None or rk < best[0]:
            best = (rk, key)
            best_perm = tuple(perm)
    return (extra, best[1]), best_perm


def canonical_form(G: StableGraph, bound: int = DEFAULT_VERTEX_BOUND):
    """Isomorphism-invariant encoding of G (orientation and edge order ignored)."""
    key = ("cf", bound)
    if key not in G._cache:
        labels = [(g, l) for g, l in zip(G.genera, G.legs)]
        G._cache[key] = canonical_key(labels, G.edges, bound, extra=("G", G.semistable))
    return G._cache[key][0]


def canonical_perm(G: StableGraph, bound: int = DEFAULT_VERTEX_BOUND) -> tuple[int, ...]:
    canonical_form(G, bound)
    return G._cache[("cf", bound)][1]


def canonical_graph(G: StableGraph) -> StableGraph:
    """A representative determined by the canonical form (edges oriented low -> high)."""
    (_, (labels, enc)) = canonical_form(G)
    genera = tuple(l[0] for l in labels)
    legs = tuple(l[1] for l in labels)
    return StableGraph(genera, legs, tuple((u, v) for u, v in enc), G.semistable)


def is_isomorphic(G: StableGraph, H: StableGraph) -> bool:
    return canonical_form(G) == canonical_form(H)


def automorphism_order(G: StableGraph, bound: int = DEFAULT_VERTEX_BOUND) -> int:
    """|Aut G| counting vertex maps, edge bijections and loop half-edge swaps.

    For every label-preserving vertex permutation that preserves edge
    multiplicities, the compatible edge/half-edge bijections number
    prod m_uv! over vertex pairs times prod (m_vv! 2^m_vv) over loops.
    """
    if "aut" in G._cache:
        return G._cache["aut"]
    nv = G.n_vertices
    if nv > bound:
        raise GraphError(f"{nv} vertices exceed the search bound {bound}")
    mult: dict[tuple[int, int], int] = {}
    for t, h in G.edges:
        k = (min(t, h), max(t, h))
        mult[k] = mult.get(k, 0) + 1
    labels = [(g, l, G.degree(v)) for v, (g, l) in enumerate(zip(G.genera, G.legs))]
    groups: dict = {}
    for v in range(nv):
        groups.setdefault(labels[v], []).append(v)
    glist = list(groups.values())
    per_map = 1
    for (u, v), m in mult.items():
        per_map *= factorial(m) * (2 ** m if u == v else 1)
    count = 0
    for choice in product(*(permutations(g) for g in glist)):
        sigma = [0] * nv
        for src, dst in zip(glist, choice):
            for a, b in zip(src, dst):
                sigma[a] = b
        ok = True
        for (u, v), m in mult.items():
            a, b = sigma[u], sigma[v]
            if mult.get((min(a, b), max(a, b)), 0) != m:
                ok = False
                break
        if ok:
            count += 1
    G._cache["aut"] = count * per_map
    return count * per_map


def automorphism_order_bruteforce(G: StableGraph) -> int:
    """Count half-edge permutations preserving the involution and vertex data.

    Exponential; meant for cross-checking on small graphs.
    """
    nh = 2 * G.n_edges
    owner = [G.halfedge_vertex(h) for h in range(nh)]
    nv = G.n_vertices
    count = 0
    for sigma in permutations(range(nv)):
        if any(G.genera[v] != G.genera[sigma[v]] or G.legs[v] != G.legs[sigma[v]] for v in range(nv)):
            continue
        # half-edges at v must map to half-edges at sigma(v), respecting pairing

        def extend(h: int, image: dict) -> int:
            if h == nh:
                return 1
            if h in image:
                return extend(h + 1, image)
            total = 0
            partner = h ^ 1
            for x in range(nh):
                if x in image.values() or owner[x] != sigma[owner[h]]:
                    continue
                y = x ^ 1
                if y in image.values() or owner[y] != sigma[owner[partner]]:
                    continue
                if x == y:
                    continue
                image[h] = x
                image[partner] = y
                total += extend(h + 1, image)
                del image[h]
                del image[partner]
            return total

        count += extend(0, {})
    return count


# enumeration -------------------------------------------------------------------

def _degenerations(G: StableGraph) -> Iterator[StableGraph]:
    """All graphs obtained by adding one edge (self-node or vertex split)."""
    nv = G.n_vertices
    for v in range(nv):
        g = G.genera[v]
        if g >= 1:
            genera = G.genera[:v] + (g - 1,) + G.genera[v + 1:]
            yield StableGraph(genera, G.legs, G.edges + ((v, v),))
        halves = G.halfedges_at(v)
        legs = G.legs[v]
        for g1 in range(g + 1):
            for lmask in range(2 ** len(legs)):
                l1 = tuple(m for k, m in enumerate(legs) if lmask >> k & 1)
                l2 = tuple(m for k, m in enumerate(legs) if not lmask >> k & 1)
                for hmask in range(2 ** len(halves)):
                    moved = {h for k, h in enumerate(halves) if hmask >> k & 1}
                    w = nv
                    edges = []
                    for i, (t, h) in enumerate(G.edges):
                        t2 = w if 2 * i in moved else t
                        h2 = w if 2 * i + 1 in moved else h
                        edges.append((t2, h2))
                    edges.append((v, w))
                    genera = G.genera[:v] + (g1,) + G.genera[v + 1:] + (g - g1,)
                    nlegs = G.legs[:v] + (l1,) + G.legs[v + 1:] + (l2,)
                    H = StableGraph(genera, nlegs, tuple(edges))
                    if H.vertex_is_stable(v) and H.vertex_is_stable(w):
                        yield H


def enumerate_stable_graphs(g: int, n: int, max_edges: int | None = None, bound: int = DEFAULT_VERTEX_BOUND) -> list[StableGraph]:
    """All stable graphs of genus g with n legs and at most max_edges edges, up to isomorphism.

    Every stable graph contracts to one with one edge fewer, so growing
    from the smooth graph one degeneration at a time reaches all of them.
    """
    if 2 * g - 2 + n <= 0:
        raise GraphError(f"(g, n) = ({g}, {n}) is not stable")
    top = 3 * g - 3 + n
    if max_edges is None or max_edges > top:
        max_edges = top
    if 2 * g - 2 + n > bound:
        raise GraphError("vertex count may exceed the search bound")
    layer = {canonical_form(G): canonical_graph(G) for G in [StableGraph.smooth(g, n)]}
    out = list(layer.values())
    for _ in range(max_edges):
        nxt: dict = {}
        for G in layer.values():
            for H in _degenerations(G):
                k = canonical_form(H)
                if k not in nxt:
                    nxt[k] = canonical_graph(H)
        layer = nxt
        out.extend(layer.values())
    return sorted(out, key=lambda G: (G.n_edges, repr(canonical_form(G))))


def enumerate_stable_graphs_direct(g: int, n: int, max_edges: int | None = None) -> list[StableGraph]:
    """Independent enumeration: genus vectors, multigraphs, leg placements, dedup."""
    top = 3 * g - 3 + n
    if max_edges is None or max_edges > top:
        max_edges = top
    found: dict = {}
    for nv in range(1, max(2 * g - 2 + n, 1) + 1):
        pairs = [(u, v) for u in range(nv) for v in range(u, nv)]
        for ne in range(nv - 1, max_edges + 1):
            hh = ne - nv + 1
            if hh > g:
                continue
            for genera in _compositions(g - hh, nv):
                for mults in _multisets(len(pairs), ne):
                    edges = tuple(pairs[k] for k, m in enumerate(mults) for _ in range(m))
                    for place in product(range(nv), repeat=n):
                        legs = tuple(tuple(i + 1 for i in range(n) if place[i] == v) for v in range(nv))
                        G = StableGraph(genera, legs, edges)
                        if not G.is_connected() or not G.is_stable():
                            continue
                        k = canonical_form(G)
                        if k not in found:
                            found[k] = canonical_graph(G)
    return sorted(found.values(), key=lambda G: (G.n_edges, repr(canonical_form(G))))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def _multisets(slots: int, total: int) -> Iterator[tuple[int, ...]]:
    yield from _compositions(total, slots) if slots else iter([()] if total == 0 else [])


# small named graphs used in docs, tests and the CLI ------------------------------

def loop_graph(g: int = 0, legs: Sequence[int] = ()) -> StableGraph:
    return StableGraph((g,), (tuple(legs),), ((0, 0),), semistable=(g == 0 and len(legs) == 0))


def banana(m: int, genera: tuple[int, int] = (0, 0), legs=((), ())) -> StableGraph:
    return StableGraph(genera, legs, ((0, 1),) * m)


def edge_tree(genera: tuple[int, int] = (1, 1), legs=((), ())) -> StableGraph:
    return StableGraph(genera, legs, ((0, 1),))
