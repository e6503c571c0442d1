"""Public evaluators for C(G), its top part, and charge specialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..exactmath import MultiPoly, Relation, poly_normalize
from ..exactmath.poly import Scalar
from ..graphcore import StableGraph, canonical_key, subdivide_all
from .oracle import cg_oracle_poly, charge_vars
from .zagier import zagier_value

METHODS = ("oracle", "zagier-laurent", "zagier-division")


@dataclass(frozen=True)
class GraphInvariant:
    graph: StableGraph
    value: MultiPoly
    method: str
    provenance: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "graph": self.graph.to_json(),
            "method": self.method,
            "value": self.value.to_json(),
            "value_text": str(self.value),
            "provenance": dict(sorted(self.provenance.items())),
        }


def charge_relation(nv: int) -> Relation:
    """sum_v x_v = 0, eliminating the last vertex charge."""
    names = charge_vars(nv)
    return Relation(MultiPoly.linear({v: 1 for v in names}), names[-1])


def _multigraph_key(G: StableGraph):
    """Canonical key of the bare multigraph (C only sees vertices and edges)."""
    return canonical_key([0] * G.n_vertices, G.edges, extra="multigraph")


class InvariantCache:
    """In-memory memo for C(G) keyed by the bare multigraph.

    Values are stored in canonical vertex numbering and transported back
    through the canonicalizing permutation, then reduced mod sum x_v.
    """

    def __init__(self, backing=None):
        self._mem: dict = {}
        self.backing = backing
        self.hits = 0
        self.misses = 0

    def get(self, G: StableGraph, kind: str, compute) -> MultiPoly:
        key, perm = _multigraph_key(G)
        full = (kind, repr(key))
        val = self._mem.get(full)
        if val is None and self.backing is not None:
            val = self.backing.load(full)
            if val is not None:
                self._mem[full] = val
        if val is None:
            self.misses += 1
            canon = G.relabel_vertices(perm)
            val = compute(canon)
            self._mem[full] = val
            if self.backing is not None:
                self.backing.store(full, val)
        else:
            self.hits += 1
        nv = G.n_vertices
        names = charge_vars(nv)
        mapping = {names[perm[v]]: MultiPoly.var(names[v]) for v in range(nv)}
        return poly_normalize(val.subs(mapping), charge_relation(nv)).trim()

    def clear(self) -> None:
        self._mem.clear()


CACHE = InvariantCache()


def cg_oracle(G: StableGraph) -> GraphInvariant:
    value, prov = cg_oracle_poly(G)
    return GraphInvariant(G, value, "oracle", prov)


def cg_zagier(G: StableGraph, strategy: str = "laurent", cache: InvariantCache | None = None) -> GraphInvariant:
    if cache is not None:
        value = cache.get(G, f"full-{strategy}", lambda H: zagier_value(H, "full", strategy))
    else:
        value = zagier_value(G, "full", strategy)
    return GraphInvariant(G, value, f"zagier-{strategy}", {"trees": None, "kind": "full"})


def cg_top(G: StableGraph, strategy: str = "laurent") -> GraphInvariant:
    value = zagier_value(G, "top", strategy)
    return GraphInvariant(G, value, f"zagier-{strategy}", {"kind": "top"})


def evaluate(G: StableGraph, method: str) -> GraphInvariant:
    if method == "oracle":
        return cg_oracle(G)
    if method in ("zagier-laurent", "laurent"):
        return cg_zagier(G, "laurent")
    if method in ("zagier-division", "division"):
        return cg_zagier(G, "division")
    raise ValueError(f"unknown method {method!r}")


# specialization ---------------------------------------------------------------

@dataclass
class SpecializationData:
    """Leg charges, b, optional per-vertex multidegree, and the ambient relation."""

    b: MultiPoly
    a: dict[int, MultiPoly]
    delta: dict[int, MultiPoly] = field(default_factory=dict)
    relation: Relation | None = None

    @classmethod
    def symbolic(cls, g: int, n: int) -> "SpecializationData":
        """b, a1..an with a1 eliminated (or b = 0 when n = 0)."""
        b = MultiPoly.var("b") if n else MultiPoly.zero()
        a = {i: MultiPoly.var(f"a{i}") for i in range(1, n + 1)}
        rel = ambient_relation(g, n) if n else None
        return cls(b, a, {}, rel)

    @classmethod
    def numeric(cls, b: Scalar, a: Sequence[Scalar], delta: Mapping[int, Scalar] | None = None) -> "SpecializationData":
        return cls(
            MultiPoly.const(b),
            {i + 1: MultiPoly.const(x) for i, x in enumerate(a)},
            {v: MultiPoly.const(d) for v, d in (delta or {}).items()},
            None,
        )


def ambient_relation(g: int, n: int) -> Relation:
    """a1 + ... + an = (2g-2+n) b, eliminating a1."""
    coeffs = {f"a{i}": 1 for i in range(1, n + 1)}
    coeffs["b"] = -(2 * g - 2 + n)
    return Relation(MultiPoly.linear(coeffs), "a1")


def vertex_charges(G: StableGraph, spec: SpecializationData) -> list[MultiPoly]:
    """a_v = sum_{legs at v} a_i - (2g_v - 2 + n_v) b - delta_v; zero on subdivision vertices."""
    out = []
    for v in range(G.n_vertices):
        if G.semistable and G.genera[v] == 0 and not G.legs[v] and G.degree(v) == 2:
            out.append(MultiPoly.zero())
            continue
        acc = MultiPoly.zero()
        for i in G.legs[v]:
            if i not in spec.a:
                raise ValueError(f"no charge for leg {i}")
            acc = acc + spec.a[i]
        acc = acc - spec.b * (2 * G.genera[v] - 2 + G.valence(v))
        if v in spec.delta:
            acc = acc - spec.delta[v]
        out.append(poly_normalize(acc, spec.relation))
    total = sum(out, MultiPoly.zero())
    if total != 0:
        raise ValueError(f"vertex charges do not sum to zero: {total}")
    return out


def specialize(inv: GraphInvariant, spec: SpecializationData) -> MultiPoly:
    G = inv.graph
    charges = vertex_charges(G, spec)
    names = charge_vars(G.n_vertices)
    val = inv.value.subs({names[v]: charges[v] for v in range(G.n_vertices)})
    return poly_normalize(val, spec.relation).trim()


def dr_coeff(
    G: StableGraph,
    edge_psi: Mapping[int, int] | Sequence[int] | None,
    spec: SpecializationData,
    route: str = "direct",
    strategy: str = "laurent",
    kind: str = "full",
) -> MultiPoly:
    """Coefficient of the edge-psi decorated stratum of G in the piecewise-polynomial part.

    ``route="direct"`` feeds the specialized charges straight into the
    tree sum; ``route="generic"`` evaluates C of the subdivided graph in
    free charges first and then specializes.  Both give the same answer.
    """
    if edge_psi is None:
        counts = [0] * G.n_edges
    elif isinstance(edge_psi, Mapping):
        counts = [edge_psi.get(e, 0) for e in range(G.n_edges)]
    else:
        counts = list(edge_psi)
    H = subdivide_all(G, counts)
    if route == "direct":
        val = zagier_value(H, kind, strategy, vertex_charges(H, spec))
        return poly_normalize(val, spec.relation).trim()
    if route == "generic":
        inv = GraphInvariant(H, zagier_value(H, kind, strategy), f"zagier-{strategy}")
        return specialize(inv, spec)
    raise ValueError(f"unknown route {route!r}")
