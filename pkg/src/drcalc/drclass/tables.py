"""DR coefficient tables over decorated strata.

A DR stratum (G, d, p, m) stands for the pushforward along the gluing
map of G of

    prod_e (-psi_h - psi_h')^{d_e} / (d_e + 1)!  *  kappa_1^p  *  prod_i psi_i^{m_i}

where kappa_1 is pulled back from the moduli space (so it is the sum
of the vertex kappa_1 classes).  Entries are polynomials in b, a_2..a_n
with a_1 eliminated through a_1 + ... + a_n = (2g-2+n) b.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

from ..drinvariant import SpecializationData, dr_coeff
from ..exactmath import MultiPoly, Relation, poly_normalize
from ..graphcore import StableGraph, automorphism_order, canonical_key, enumerate_stable_graphs
from .strata import FineStratum, FineTable

FLAVORS = ("full", "top")
DEFAULT_BUDGET = 50_000


class BudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class DivisorMonomial:
    kappa1: int
    psi: tuple[int, ...]

    @property
    def codim(self) -> int:
        return self.kappa1 + sum(self.psi)


@dataclass(frozen=True)
class DecoratedStratum:
    graph: StableGraph
    edge_psi: tuple[int, ...]
    divisor: DivisorMonomial

    @property
    def codim(self) -> int:
        return self.graph.n_edges + sum(self.edge_psi) + self.divisor.codim

    def key(self):
        G = self.graph
        labels = [(G.genera[v], tuple((i, self.divisor.psi[i - 1]) for i in G.legs[v])) for v in range(G.n_vertices)]
        edges = [(t, h, d, d) for (t, h), d in zip(G.edges, self.edge_psi)]
        return canonical_key(labels, edges, extra=("dr", self.divisor.kappa1))

    def canonical(self):
        key, perm = self.key()
        G = self.graph.relabel_vertices(perm)
        # edges of G keep their order; sort them to match the key encoding
        order = sorted(range(G.n_edges), key=lambda e: (tuple(sorted(G.edges[e])), self.edge_psi[e]))
        G2 = StableGraph(G.genera, G.legs, tuple(tuple(sorted(G.edges[e])) for e in order), G.semistable)
        d2 = tuple(self.edge_psi[e] for e in order)
        return key, DecoratedStratum(G2, d2, self.divisor)

    def describe(self) -> str:
        parts = [str(self.graph)]
        if any(self.edge_psi):
            parts.append("edge_psi=" + ",".join(str(d) for d in self.edge_psi))
        if self.divisor.kappa1:
            parts.append(f"kappa1^{self.divisor.kappa1}")
        for i, e in enumerate(self.divisor.psi):
            if e:
                parts.append(f"psi{i + 1}^{e}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "edge_psi": list(self.edge_psi),
            "kappa1": self.divisor.kappa1,
            "leg_psi": list(self.divisor.psi),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DecoratedStratum":
        G = StableGraph.from_json(data["graph"])
        return cls(G, tuple(data["edge_psi"]), DivisorMonomial(int(data["kappa1"]), tuple(data["leg_psi"])))

    def to_fine(self) -> list[tuple[FineStratum, Fraction]]:
        """Expansion in the fine basis (psi at each half-edge, kappa per vertex)."""
        G = self.graph
        nv = G.n_vertices
        edge_choices = []
        for d in self.edge_psi:
            opts = []
            for i in range(d + 1):
                opts.append(((i, d - i), Fraction((-1) ** d * comb(d, i), factorial(d + 1))))
            edge_choices.append(opts)
        p = self.divisor.kappa1
        kappa_choices = []
        for split in _compositions(p, nv):
            c = Fraction(factorial(p))
            for s in split:
                c /= factorial(s)
            kappa_choices.append((tuple((1,) * s for s in split), c))
        out = []
        for combo in product(*edge_choices):
            hpsi = tuple(x for (pair, _) in combo for x in pair)
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            for kap, kc in kappa_choices:
                out.append((FineStratum(G, hpsi, self.divisor.psi, kap), coeff * kc))
        return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _bounded_vectors(k: int, total_max: int) -> Iterator[tuple[int, ...]]:
    for s in range(total_max + 1):
        yield from _compositions(s, k)


@dataclass
class DRTable:
    g: int
    n: int
    c_max: int
    flavor: str
    entries: dict = field(default_factory=dict)  # key -> (DecoratedStratum, MultiPoly)
    relation: Relation | None = None

    def add(self, s: DecoratedStratum, c: MultiPoly) -> None:
        if c.is_zero():
            return
        key, rep = s.canonical()
        if key in self.entries:
            new = self.entries[key][1] + c
            if new.is_zero():
                del self.entries[key]
            else:
                self.entries[key] = (self.entries[key][0], new)
        else:
            self.entries[key] = (rep, c)

    def __iter__(self) -> Iterator[tuple[DecoratedStratum, MultiPoly]]:
        for key in sorted(self.entries, key=lambda k: (self.entries[k][0].codim, repr(k))):
            yield self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, s: DecoratedStratum) -> MultiPoly:
        key, _ = s.canonical()
        return self.entries.get(key, (s, MultiPoly.zero()))[1]

    def codim_part(self, c: int) -> "DRTable":
        out = DRTable(self.g, self.n, self.c_max, self.flavor, relation=self.relation)
        out.entries = {k: v for k, v in self.entries.items() if v[0].codim == c}
        return out

    def map(self, f) -> "DRTable":
        out = DRTable(self.g, self.n, self.c_max, self.flavor, relation=self.relation)
        for k, (s, c) in self.entries.items():
            v = MultiPoly.coerce(f(s, c))
            if not v.is_zero():
                out.entries[k] = (s, v)
        return out

    def to_fine(self) -> FineTable:
        out = FineTable()
        for s, c in self:
            for fs, x in s.to_fine():
                out.add(fs, c * x)
        return out

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "dr-table",
            "g": self.g,
            "n": self.n,
            "codim": self.c_max,
            "flavor": self.flavor,
            "relation": self.relation.to_json() if self.relation else None,
            "entries": [
                {"stratum": s.to_json(), "stratum_text": s.describe(), "codim": s.codim, "poly": c.to_json(), "poly_text": str(c)}
                for s, c in self
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DRTable":
        if data.get("kind") != "dr-table":
            raise ValueError("not a DR table")
        rel = Relation.from_json(data["relation"]) if data.get("relation") else None
        t = cls(int(data["g"]), int(data["n"]), int(data["codim"]), data["flavor"], relation=rel)
        for e in data["entries"]:
            t.add(DecoratedStratum.from_json(e["stratum"]), MultiPoly.from_json(e["poly"]))
        return t


def _dr_job(args):
    G, d, spec, kind = args
    return dr_coeff(G, d, spec, kind=kind)


def _jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("DRCALC_JOBS", "1") or 1)
    return max(1, jobs)


def assemble_dr(
    g: int,
    n: int,
    c_max: int,
    flavor: str = "full",
    spec: SpecializationData | None = None,
    drd: bool = True,
    budget: int = DEFAULT_BUDGET,
    jobs: int | None = None,
) -> DRTable:
    """All entries of DR_g(b; a) (or its top-degree part) up to codimension c_max.

    ``drd=False`` keeps only the piecewise-polynomial part, i.e. the
    entries whose divisor monomial is trivial.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if c_max < 0:
        raise ValueError("codimension bound must be nonnegative")
    spec = spec or SpecializationData.symbolic(g, n)
    kind = "top" if flavor == "top" else "full"
    graphs = enumerate_stable_graphs(g, n, c_max)

    # distinct (G, d) up to decorated isomorphism
    jobs_list: dict = {}
    labeled: list[tuple[StableGraph, tuple[int, ...], object]] = []
    for G in graphs:
        for d in _bounded_vectors(G.n_edges, c_max - G.n_edges):
            s = DecoratedStratum(G, d, DivisorMonomial(0, (0,) * n))
            key, _ = s.key()
            labeled.append((G, d, key))
            jobs_list.setdefault(key, (G, d))
            if len(labeled) > budget:
                raise BudgetError(f"more than {budget} decorated graphs")
    keys = list(jobs_list)
    work = [(jobs_list[k][0], jobs_list[k][1], spec, kind) for k in keys]
    nj = _jobs(jobs)
    if nj > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=nj) as ex:
            values = list(ex.map(_dr_job, work, chunksize=4))
    else:
        values = [_dr_job(w) for w in work]
    coeff = dict(zip(keys, values))

    rel = spec.relation
    b_term = spec.b * spec.b * Fraction(-1, 2)
    a_terms = [spec.a[i] * spec.a[i] * Fraction(1, 2) for i in range(1, n + 1)]
    table = DRTable(g, n, c_max, flavor, relation=rel)
    for G, d, key in labeled:
        P = coeff[key]
        if P.is_zero():
            continue
        base = P * Fraction(1, automorphism_order(G))
        c0 = G.n_edges + sum(d)
        room = c_max - c0
        if not drd:
            table.add(DecoratedStratum(G, d, DivisorMonomial(0, (0,) * n)), poly_normalize(base, rel).trim())
            continue
        for p in range(room + 1):
            for m in _bounded_vectors(n, room - p):
                c = base * (b_term ** p) * Fraction(1, factorial(p))
                for i, mi in enumerate(m):
                    if mi:
                        c = c * (a_terms[i] ** mi) * Fraction(1, factorial(mi))
                c = poly_normalize(c, rel).trim()
                if flavor == "top":
                    c = c.homogeneous_part(2 * (c0 + p + sum(m)))
                table.add(DecoratedStratum(G, d, DivisorMonomial(p, m)), c)
    return table


def apply_drd(table: DRTable, spec: SpecializationData | None = None) -> DRTable:
    """Multiply a piecewise-polynomial table by exp(DRD), truncated at c_max."""
    spec = spec or SpecializationData.symbolic(table.g, table.n)
    n = table.n
    b_term = spec.b * spec.b * Fraction(-1, 2)
    a_terms = [spec.a[i] * spec.a[i] * Fraction(1, 2) for i in range(1, n + 1)]
    out = DRTable(table.g, n, table.c_max, table.flavor, relation=table.relation)
    for s, P in table:
        if s.divisor.codim:
            raise ValueError("input must carry trivial divisor monomials")
        room = table.c_max - s.codim
        for p in range(room + 1):
            for m in _bounded_vectors(n, room - p):
                c = P * (b_term ** p) * Fraction(1, factorial(p))
                for i, mi in enumerate(m):
                    if mi:
                        c = c * (a_terms[i] ** mi) * Fraction(1, factorial(mi))
                out.add(DecoratedStratum(s.graph, s.edge_psi, DivisorMonomial(p, m)), poly_normalize(c, table.relation).trim())
    return out


def _parse_monomial(monomial) -> dict[str, int]:
    if isinstance(monomial, Mapping):
        return {k: int(v) for k, v in monomial.items() if v}
    p = MultiPoly.parse(monomial) if isinstance(monomial, str) else MultiPoly.coerce(monomial)
    items = list(p.items())
    if len(items) != 1 or items[0][1] != 1:
        raise ValueError(f"{monomial!r} is not a monomial")
    return {k: v for k, v in items[0][0].items() if v}


def extract_coefficient(table: DRTable, monomial, codim: int) -> dict[DecoratedStratum, Fraction]:
    """Per-stratum coefficient of b^m a_2^k2 ... in the codimension-``codim`` part."""
    if table.flavor != "full":
        raise ValueError("coefficient extraction expects a full table")
    if codim > table.c_max:
        raise ValueError("codimension beyond the table bound")
    mono = _parse_monomial(monomial)
    if "a1" in mono:
        raise ValueError("a1 is eliminated; rewrite the monomial in b, a2, ..., an")
    allowed = {"b"} | {f"a{i}" for i in range(2, table.n + 1)}
    bad = set(mono) - allowed
    if bad:
        raise ValueError(f"unknown variables {sorted(bad)}")
    out = {}
    for s, c in table:
        if s.codim == codim:
            out[s] = c.coefficient(mono)
    return out


def fine_of_entries(items: Iterable[tuple[DecoratedStratum, MultiPoly]]) -> FineTable:
    out = FineTable()
    for s, c in items:
        for fs, x in s.to_fine():
            out.add(fs, c * x)
    return out
