"""Decorated strata in the free module, with gluing and forgetful pushforward.

A basis element [G, D] stands for the pushforward along the gluing map
of G of a monomial D in psi classes (at half-edges and legs) and kappa
classes (at vertices).  No factor 1/|Aut G| is attached, so
isomorphic decorations give literally the same element and gluing maps
act without multiplicities.  Nothing here imposes tautological
relations: two tables are equal only if they agree term by term.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from ..exactmath import MultiPoly
from ..exactmath.poly import Scalar
from ..graphcore import GraphError, StableGraph, canonical_key


@dataclass(frozen=True)
class FineStratum:
    graph: StableGraph
    hpsi: tuple[int, ...]  # exponent at half-edge 2i (tail) and 2i+1 (head)
    lpsi: tuple[int, ...]  # exponent at leg i+1
    kappa: tuple[tuple[int, ...], ...]  # sorted kappa indices (all >= 1) per vertex

    def __post_init__(self):
        G = self.graph
        if len(self.hpsi) != 2 * G.n_edges or len(self.lpsi) != G.n_legs or len(self.kappa) != G.n_vertices:
            raise ValueError("decoration does not match the graph")
        object.__setattr__(self, "kappa", tuple(tuple(sorted(k)) for k in self.kappa))

    @classmethod
    def bare(cls, G: StableGraph) -> "FineStratum":
        return cls(G, (0,) * (2 * G.n_edges), (0,) * G.n_legs, ((),) * G.n_vertices)

    @property
    def codim(self) -> int:
        return self.graph.n_edges + sum(self.hpsi) + sum(self.lpsi) + sum(sum(k) for k in self.kappa)

    def key(self):
        G = self.graph
        labels = []
        for v in range(G.n_vertices):
            legs = tuple((i, self.lpsi[i - 1]) for i in G.legs[v])
            labels.append((G.genera[v], legs, self.kappa[v]))
        edges = [(t, h, self.hpsi[2 * i], self.hpsi[2 * i + 1]) for i, (t, h) in enumerate(G.edges)]
        return canonical_key(labels, edges, extra="fine")

    def canonical(self) -> tuple:
        """(hashable key, canonical representative)."""
        (tag, (labels, enc)), _ = self.key()
        genera = tuple(l[0] for l in labels)
        legs = tuple(tuple(i for i, _ in l[1]) for l in labels)
        n = sum(len(l) for l in legs)
        lpsi = [0] * n
        for l in labels:
            for i, e in l[1]:
                lpsi[i - 1] = e
        kappa = tuple(l[2] for l in labels)
        edges = tuple((u, v) for u, v, _, _ in enc)
        hpsi = tuple(x for _, _, du, dv in enc for x in (du, dv))
        G = StableGraph(genera, legs, edges, self.graph.semistable)
        return (tag, (labels, enc)), FineStratum(G, hpsi, tuple(lpsi), kappa)

    def describe(self) -> str:
        G = self.graph
        parts = [str(G)]
        dec = []
        for i, (t, h) in enumerate(G.edges):
            if self.hpsi[2 * i] or self.hpsi[2 * i + 1]:
                dec.append(f"e{i}:psi^({self.hpsi[2 * i]},{self.hpsi[2 * i + 1]})")
        for i, e in enumerate(self.lpsi):
            if e:
                dec.append(f"psi{i + 1}^{e}")
        for v, k in enumerate(self.kappa):
            if k:
                dec.append(f"v{v}:kappa{list(k)}")
        if dec:
            parts.append(" ".join(dec))
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "halfedge_psi": list(self.hpsi),
            "leg_psi": list(self.lpsi),
            "kappa": [list(k) for k in self.kappa],
        }


class FineTable:
    """Linear combination of decorated strata with polynomial coefficients."""

    def __init__(self, items: Iterable[tuple[FineStratum, MultiPoly | Scalar]] = ()):
        self.entries: dict = {}
        for s, c in items:
            self.add(s, c)

    def add(self, s: FineStratum, c: MultiPoly | Scalar) -> None:
        c = MultiPoly.coerce(c)
        if c.is_zero():
            return
        key, rep = s.canonical()
        old = self.entries.get(key)
        if old is None:
            self.entries[key] = (rep, c)
        else:
            new = old[1] + c
            if new.is_zero():
                del self.entries[key]
            else:
                self.entries[key] = (rep, new)

    def __iter__(self) -> Iterator[tuple[FineStratum, MultiPoly]]:
        for key in sorted(self.entries, key=repr):
            yield self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)

    def map(self, f) -> "FineTable":
        out = FineTable()
        for key, (rep, c) in self.entries.items():
            v = f(rep, c)
            if v is not None and not MultiPoly.coerce(v).is_zero():
                out.entries[key] = (rep, MultiPoly.coerce(v))
        return out

    def scaled(self, x: Scalar | MultiPoly) -> "FineTable":
        return self.map(lambda s, c: c * x)

    def __add__(self, other: "FineTable") -> "FineTable":
        out = FineTable()
        out.entries = dict(self.entries)
        for key, (rep, c) in other.entries.items():
            if key in out.entries:
                new = out.entries[key][1] + c
                if new.is_zero():
                    del out.entries[key]
                else:
                    out.entries[key] = (out.entries[key][0], new)
            else:
                out.entries[key] = (rep, c)
        return out

    def __sub__(self, other: "FineTable") -> "FineTable":
        return self + other.scaled(-1)

    def codim_part(self, c: int) -> "FineTable":
        return self.map(lambda s, x: x if s.codim == c else None)

    def is_zero(self) -> bool:
        return not self.entries

    def first_difference(self, other: "FineTable"):
        """A witness (stratum, lhs, rhs) where the tables differ, or None."""
        diff = self - other
        for rep, c in diff:
            key, _ = rep.canonical()
            lhs = self.entries.get(key, (rep, MultiPoly.zero()))[1]
            rhs = other.entries.get(key, (rep, MultiPoly.zero()))[1]
            return rep, lhs, rhs
        return None

    def to_json(self) -> list:
        return [{"stratum": s.to_json(), "stratum_text": s.describe(), "poly": c.to_json(), "poly_text": str(c)} for s, c in self]


# gluing ----------------------------------------------------------------------------

def glue_fine(s: FineStratum, i: int, j: int) -> FineStratum:
    """Glue legs i and j into a new last edge; psi at the legs moves to its halves."""
    G = s.graph
    vi, vj = G.leg_vertex(i), G.leg_vertex(j)
    legs = [tuple(m for m in l if m not in (i, j)) for l in G.legs]
    keep = [m for m in range(1, G.n_legs + 1) if m not in (i, j)]
    relabel = {m: k + 1 for k, m in enumerate(keep)}
    legs = tuple(tuple(relabel[m] for m in l) for l in legs)
    H = StableGraph(G.genera, legs, G.edges + ((vi, vj),), G.semistable)
    hpsi = s.hpsi + (s.lpsi[i - 1], s.lpsi[j - 1])
    lpsi = tuple(s.lpsi[m - 1] for m in keep)
    return FineStratum(H, hpsi, lpsi, s.kappa)


def glue_pairs(s: FineStratum, first: int, m: int) -> FineStratum:
    """Glue legs (first, first+1), (first+2, first+3), ... m pairs, highest pair first."""
    out = s
    for k in reversed(range(m)):
        a = first + 2 * k
        out = glue_fine(out, a, a + 1)
    return out


# forgetful pushforward ---------------------------------------------------------

def _drop_vertex(G: StableGraph, v: int) -> list[int]:
    return [w if w < v else w - 1 for w in range(G.n_vertices)]


def push_forget_last(s: FineStratum) -> list[tuple[FineStratum, int]]:
    """Pushforward along the map forgetting the last marking.

    Returns (stratum, integer multiplicity) pairs.  If the carrier vertex
    stays stable, the usual formulas for forgetting a point apply
    (psi of the forgotten point becomes a kappa class, kappa_0 being the
    scalar 2g_v-2+n_v; otherwise one psi exponent is lowered or kappa
    classes merge).  If the carrier is a genus-0 vertex with exactly two
    other special points, the stratum is contracted when undecorated
    there and vanishes otherwise.
    """
    G = s.graph
    n = G.n_legs
    if n == 0:
        raise GraphError("no marking to forget")
    v = G.leg_vertex(n)
    a = s.lpsi[n - 1]
    K = list(s.kappa[v])
    val_after = G.valence(v) - 1
    if 2 * G.genera[v] - 2 + val_after > 0:
        kappa0 = 2 * G.genera[v] - 2 + val_after
        legs = tuple(tuple(m for m in l if m != n) for l in G.legs)
        H = StableGraph(G.genera, legs, G.edges, G.semistable)
        lpsi = s.lpsi[:-1]
        out: list[tuple[FineStratum, int]] = []

        def with_kappa(new_k: list[int], hpsi=s.hpsi, lp=lpsi):
            kap = list(s.kappa)
            kap[v] = tuple(sorted(new_k))
            return FineStratum(H, tuple(hpsi), tuple(lp), tuple(kap))

        idx = range(len(K))
        if a >= 1:
            for r in range(len(K) + 1):
                for S in combinations(idx, r):
                    rest = [K[j] for j in idx if j not in S]
                    k = a - 1 + sum(K[j] for j in S)
                    if k == 0:
                        out.append((with_kappa(rest), kappa0))
                    else:
                        out.append((with_kappa(rest + [k]), 1))
            return out
        # no psi at the forgotten point: lower one psi exponent at v ...
        for h in G.halfedges_at(v):
            if s.hpsi[h]:
                hp = list(s.hpsi)
                hp[h] -= 1
                out.append((with_kappa(K, hpsi=hp), 1))
        for i in G.legs[v]:
            if i != n and lpsi[i - 1]:
                lp = list(lpsi)
                lp[i - 1] -= 1
                out.append((with_kappa(K, lp=lp), 1))
        # ... or merge a nonempty set of kappa classes
        for r in range(1, len(K) + 1):
            for S in combinations(idx, r):
                rest = [K[j] for j in idx if j not in S]
                k = sum(K[j] for j in S) - 1
                if k == 0:
                    out.append((with_kappa(rest), kappa0))
                else:
                    out.append((with_kappa(rest + [k]), 1))
        return out
    # unstable carrier: genus 0 with two further special points
    if G.genera[v] != 0 or G.valence(v) != 3:
        raise GraphError("unexpected unstable vertex")
    halves = G.halfedges_at(v)
    others = [i for i in G.legs[v] if i != n]
    decorated = a or K or any(s.hpsi[h] for h in halves) or any(s.lpsi[i - 1] for i in others)
    if decorated:
        return []
    remap = _drop_vertex(G, v)
    genera = tuple(g for w, g in enumerate(G.genera) if w != v)
    kappa = tuple(k for w, k in enumerate(s.kappa) if w != v)
    if len(halves) == 1 and len(others) == 1:
        h = halves[0]
        e = h // 2
        far = h ^ 1
        w = G.halfedge_vertex(far)
        i = others[0]
        legs = [list(l) for w2, l in enumerate(G.legs) if w2 != v]
        legs[remap[w]].append(i)
        legs = tuple(tuple(sorted(m for m in l if m != n)) for l in legs)
        edges = tuple((remap[t], remap[hh]) for k, (t, hh) in enumerate(G.edges) if k != e)
        hpsi = tuple(x for k in range(G.n_edges) if k != e for x in (s.hpsi[2 * k], s.hpsi[2 * k + 1]))
        lpsi = list(s.lpsi[:-1])
        lpsi[i - 1] = s.hpsi[far]
        H = StableGraph(genera, legs, edges, G.semistable)
        return [(FineStratum(H, hpsi, tuple(lpsi), kappa), 1)]
    if len(halves) == 2 and not others:
        h1, h2 = halves
        e1, e2 = h1 // 2, h2 // 2
        if e1 == e2:
            raise GraphError("forgetting would leave an unstable target")
        f1, f2 = h1 ^ 1, h2 ^ 1
        x, y = G.halfedge_vertex(f1), G.halfedge_vertex(f2)
        legs = tuple(tuple(m for m in l if m != n) for w2, l in enumerate(G.legs) if w2 != v)
        edges = []
        hpsi = []
        for k, (t, hh) in enumerate(G.edges):
            if k in (e1, e2):
                continue
            edges.append((remap[t], remap[hh]))
            hpsi += [s.hpsi[2 * k], s.hpsi[2 * k + 1]]
        edges.append((remap[x], remap[y]))
        hpsi += [s.hpsi[f1], s.hpsi[f2]]
        H = StableGraph(genera, legs, tuple(edges), G.semistable)
        return [(FineStratum(H, tuple(hpsi), s.lpsi[:-1], kappa), 1)]
    raise GraphError("forgetting would leave an unstable target")


def push_table(t: FineTable) -> FineTable:
    out = FineTable()
    for s, c in t:
        for s2, mult in push_forget_last(s):
            out.add(s2, c * mult)
    return out


def glue_table(t: FineTable, first: int, m: int) -> FineTable:
    out = FineTable()
    for s, c in t:
        out.add(glue_pairs(s, first, m), c)
    return out
