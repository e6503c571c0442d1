"""Per-graph checks: top-degree correspondence, its inversion, the auxiliary lemma, delta sweeps."""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Sequence

from ..drinvariant import SpecializationData, ambient_relation, charge_relation, dr_coeff, specialize, zagier_value
from ..drinvariant.core import GraphInvariant
from ..drinvariant.oracle import charge_vars
from ..drinvariant.zagier import default_charges
from ..exactmath import MultiPoly, Relation, interpolate_simplex, poly_normalize, substitute_powers
from ..exactmath.interp import simplex_points
from ..graphcore import StableGraph
from .report import CheckReport, poly_witness, timed


def _graph_param(G: StableGraph) -> dict:
    return {"graph": str(G)}


def _norm(p: MultiPoly, nv: int) -> MultiPoly:
    return poly_normalize(p, charge_relation(nv)).trim()


def shuffled(G: StableGraph, seed: int = 0) -> StableGraph:
    """Same graph with edges reordered and some orientations flipped."""
    rng = random.Random(seed)
    order = list(range(G.n_edges))
    rng.shuffle(order)
    H = G.permute_edges(order)
    for e in range(H.n_edges):
        if rng.random() < 0.5:
            H = H.flip_edge(e)
    return H


def check_topdeg_per_graph(G: StableGraph, strategies: Sequence[str] = ("laurent", "division"), robust: bool = True) -> CheckReport:
    """C(G) from the Bernoulli numerators equals the regularized-twist numerators, per tree sum."""
    res: dict = {}
    witness = None
    nv = G.n_vertices
    with timed(res):
        graphs = [G, shuffled(G)] if robust and G.n_edges > 1 else [G]
        ref = None
        for H in graphs:
            for strat in strategies:
                L = _norm(zagier_value(H, "full", strat), nv)
                R = _norm(zagier_value(H, "rhs", strat), nv)
                witness = poly_witness(L, R, f"{strat} on {H}")
                if witness:
                    break
                if ref is None:
                    ref = L
                else:
                    witness = poly_witness(L, ref, f"{strat} on {H} against the first evaluation")
                    if witness:
                        break
            if witness:
                break
    res["evaluations"] = 2 * len(graphs) * len(strategies)
    return CheckReport("topdeg_per_graph", _graph_param(G), "fail" if witness else "pass", witness, res)


def connected_complements(G: StableGraph) -> list[tuple[int, ...]]:
    """Edge subsets S such that removing S leaves the graph connected."""
    out = []
    for r in range(G.n_edges + 1):
        for S in combinations(range(G.n_edges), r):
            H = remove_edges(G, S)
            if H.is_connected():
                out.append(S)
    return out


def remove_edges(G: StableGraph, S: Sequence[int]) -> StableGraph:
    edges = tuple(e for i, e in enumerate(G.edges) if i not in set(S))
    return StableGraph(G.genera, G.legs, edges, True)


def twisted_sum(G: StableGraph, kind: str, strategy: str = "laurent", sign: bool = False) -> MultiPoly:
    """sum over S of (+-1)^|S| Reg_k[prod k_e * C_kind(G - S) with charges shifted by the twists]."""
    nv = G.n_vertices
    base = default_charges(nv)
    total = MultiPoly.zero()
    for S in connected_complements(G):
        H = remove_edges(G, S)
        charges = list(base)
        ks = []
        for e in S:
            t, h = G.edges[e]
            k = MultiPoly.var(f"k{e}")
            ks.append(f"k{e}")
            charges[t] = charges[t] + k
            charges[h] = charges[h] - k
        val = zagier_value(H, kind, strategy, charges)
        for k in ks:
            val = substitute_powers(val * MultiPoly.var(k), k, "zeta", strict=True)
        if sign and len(S) % 2:
            val = -val
        total = total + val
    return _norm(total, nv)


def check_corollary_inversion(G: StableGraph, strategy: str = "laurent") -> CheckReport:
    """C = sum_S Reg[C~(G-S)] and, inverted with signs, C~ = sum_S (-1)^|S| Reg[C(G-S)]."""
    res: dict = {}
    nv = G.n_vertices
    with timed(res):
        C = _norm(zagier_value(G, "full", strategy), nv)
        Ct = _norm(zagier_value(G, "top", strategy), nv)
        witness = poly_witness(C, twisted_sum(G, "top", strategy), "forward correspondence")
        if not witness:
            witness = poly_witness(Ct, twisted_sum(G, "full", strategy, sign=True), "inverted correspondence")
    res["subsets"] = len(connected_complements(G))
    return CheckReport("corollary_inversion", {**_graph_param(G), "strategy": strategy}, "fail" if witness else "pass", witness, res)


# auxiliary lemma ------------------------------------------------------------------

def _specialized_charges(G: StableGraph) -> list[MultiPoly]:
    b = MultiPoly.var("b")
    out = []
    for v in range(G.n_vertices):
        acc = MultiPoly.zero()
        for i in G.legs[v]:
            acc = acc + MultiPoly.var(f"a{i}")
        out.append(acc - b * (2 * G.genera[v] - 2 + G.valence(v)))
    return out


def aux_lemma_difference(G: StableGraph, strategy: str = "laurent") -> tuple[MultiPoly, MultiPoly, Relation]:
    """(LHS, RHS, relation) of the congruence for a graph with n legs, in b, a_1..a_{n+1}."""
    n = G.n_legs
    g = G.genus
    nv = G.n_vertices
    names = charge_vars(nv)
    C = zagier_value(G, "full", strategy)  # free of the last vertex variable
    T = MultiPoly.var(f"a{n + 1}") - MultiPoly.var("b")
    av = _specialized_charges(G)
    point = {names[v]: av[v] for v in range(nv - 1)}
    Tsym = MultiPoly.var("T_")

    def P(w: int) -> MultiPoly:
        p = C if w == nv - 1 else C.subs({names[w]: MultiPoly.var(names[w]) + Tsym})
        return p.subs(point).subs({"T_": T})

    b = MultiPoly.var("b")
    inner = MultiPoly.zero()
    for w in range(nv):
        weight = 2 * G.genera[w] - 2 + G.valence(w)
        if weight:
            inner = inner + b * P(w) * weight
    for i in range(1, n + 1):
        inner = inner - MultiPoly.var(f"a{i}") * P(G.leg_vertex(i))
    lhs = T * inner
    one_minus_deg = MultiPoly.zero()
    for d in range(C.degree() + 1):
        one_minus_deg = one_minus_deg + C.homogeneous_part(d) * (1 - d)
    rhs = T * T * one_minus_deg.subs(point)
    return lhs, rhs, ambient_relation(g, n + 1)


def check_aux_lemma(G: StableGraph, strategy: str = "laurent") -> CheckReport:
    """The congruence modulo (a_{n+1} - b)^3 after eliminating a_1."""
    res: dict = {}
    witness = None
    with timed(res):
        lhs, rhs, rel = aux_lemma_difference(G, strategy)
        diff = poly_normalize(lhs - rhs, rel)
        n = G.n_legs
        if n == 0:
            # everything is a multiple of b; need divisibility by b^3
            for k in range(3):
                c = diff.coeff_of("b", k)
                if not c.is_zero():
                    witness = poly_witness(c * MultiPoly.var("b") ** k, MultiPoly.zero(), f"order {k} in b")
                    break
        else:
            an = f"a{n + 1}"
            shifted = diff.subs({an: MultiPoly.var("b") + MultiPoly.var("t")})
            for k in range(3):
                c = shifted.coeff_of("t", k)
                if not c.is_zero():
                    witness = poly_witness(c, MultiPoly.zero(), f"order {k} in a{n + 1}-b")
                    break
    return CheckReport("aux_lemma", _graph_param(G), "fail" if witness else "pass", witness, res)


# delta sweeps ------------------------------------------------------------------

def delta_spec(G: StableGraph, delta: Sequence) -> SpecializationData:
    """Symbolic b, a_i with the multidegree delta; a_1 absorbs the total of delta."""
    g, n = G.genus, G.n_legs
    if n == 0:
        raise ValueError("delta sweeps need at least one leg")
    b = MultiPoly.var("b")
    a = {i: MultiPoly.var(f"a{i}") for i in range(1, n + 1)}
    total = MultiPoly.zero()
    for d in delta:
        total = total + d
    coeffs = {f"a{i}": 1 for i in range(1, n + 1)}
    coeffs["b"] = -(2 * g - 2 + n)
    form = MultiPoly.linear(coeffs) - total
    return SpecializationData(b, a, {v: MultiPoly.coerce(d) for v, d in enumerate(delta)}, Relation(form, "a1"))


def check_unidr_delta(G: StableGraph, radius: int = 3, extra: int = 12, seed: int = 0, strategy: str = "laurent") -> CheckReport:
    """Coefficient as a function of integer multidegrees is a polynomial of degree <= 2|E|.

    Values at grid points come from the specialized tree sum; the
    interpolant must match extra grid points and the generic invariant
    evaluated at charges shifted by -delta.
    """
    res: dict = {}
    nv, ne = G.n_vertices, G.n_edges
    deg = 2 * ne
    names = [f"d{v}" for v in range(nv)]
    witness = None
    with timed(res):
        if deg > 2 * radius:
            raise ValueError("grid too small for the degree")
        shift = (-radius,) * nv

        def value(delta):
            return dr_coeff(G, None, delta_spec(G, delta), strategy=strategy)

        pts = simplex_points(nv, deg)
        vals = {}
        for c in pts:
            vals[c] = value(tuple(s + k for s, k in zip(shift, c)))
        # interpolate coefficient-wise: values are polynomials in b, a_2..a_n
        monos = {}
        for c, p in vals.items():
            for mono, _ in p.items():
                monos[repr(sorted(mono.items()))] = mono
        poly = MultiPoly.zero()
        for mono in monos.values():
            scal = {c: p.coefficient(mono) for c, p in vals.items()}
            part = interpolate_simplex(scal, names, deg, shift)
            m = MultiPoly.one()
            for v, k in mono.items():
                m = m * MultiPoly.var(v) ** k
            poly = poly + part * m
        dvars = set(names)
        for v in dvars:
            if poly.degree(v) > deg:
                witness = f"degree in {v} exceeds {deg}"
        total_deg = max((sum(k for v, k in mono.items() if v in dvars) for mono, _ in poly.items()), default=0)
        if total_deg > deg:
            witness = f"total delta-degree {total_deg} exceeds {deg}"
        rng = random.Random(seed)
        grid = list(product(range(-radius, radius + 1), repeat=nv))
        checks = rng.sample(grid, min(extra, len(grid)))
        for delta in checks:
            if witness:
                break
            got = poly.subs({names[v]: delta[v] for v in range(nv)})
            witness = poly_witness(got, value(delta), f"delta={delta}")
        if not witness:
            # generic route: C(G) at a_v - delta_v with symbolic delta
            sym = delta_spec(G, [MultiPoly.var(x) for x in names])
            inv = GraphInvariant(G, zagier_value(G, "full", strategy), f"zagier-{strategy}")
            witness = poly_witness(poly, specialize(inv, sym), "symbolic delta")
    res["samples"] = len(pts) + extra
    return CheckReport("unidr_delta", {**_graph_param(G), "radius": radius}, "fail" if witness else "pass", witness, res)
