"""Entry-wise checks of whole DR tables in the fine stratum basis."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Sequence

from ..drclass import FineTable, assemble_dr, forget_pushforward, glue_table
from ..drinvariant import SpecializationData
from ..exactmath import MultiPoly, fit_univariate, poly_normalize, substitute_powers
from ..graphcore import StableGraph, automorphism_order, canonical_form, glue_legs
from .report import CheckReport, poly_witness, table_witness, timed


def twisted_spec(g: int, n: int, m: int) -> SpecializationData:
    """Charges (a_1..a_n, k_1, -k_1, ..., k_m, -k_m) with the (g, n) relation."""
    base = SpecializationData.symbolic(g, n)
    a = dict(base.a)
    for i in range(1, m + 1):
        k = MultiPoly.var(f"k{i}")
        a[n + 2 * i - 1] = k
        a[n + 2 * i] = -k
    return SpecializationData(base.b, a, {}, base.relation)


def _degree_weighted(c: int, p: MultiPoly) -> MultiPoly:
    out = MultiPoly.zero()
    for d in range(p.degree() + 1):
        part = p.homogeneous_part(d)
        if not part.is_zero():
            out = out + part * (2 * c - d)
    return out


def codim_minus_deg_sides(g: int, n: int, c_max: int) -> tuple[FineTable, FineTable]:
    if g < 1:
        raise ValueError("needs g >= 1")
    lhs_table = assemble_dr(g, n, c_max)
    lhs = FineTable()
    for s, p in lhs_table:
        w = _degree_weighted(s.codim, p)
        for fs, x in s.to_fine():
            lhs.add(fs, w * x)
    rhs = FineTable()
    if c_max >= 1:
        spec = twisted_spec(g, n, 1)
        t = assemble_dr(g - 1, n + 2, c_max - 1, spec=spec)
        t = t.map(lambda s, p: substitute_powers(p * MultiPoly.var("k1") ** 2 * Fraction(-1, 2), "k1", "B_d"))
        rhs = glue_table(t.to_fine(), n + 1, 1)
    return lhs, rhs


def check_codim_minus_deg(g: int, n: int, c_max: int) -> CheckReport:
    res: dict = {}
    with timed(res):
        lhs, rhs = codim_minus_deg_sides(g, n, c_max)
        witness = table_witness(lhs, rhs)
    res["strata"] = len(lhs)
    return CheckReport("codim_minus_deg", {"g": g, "n": n, "codim": c_max}, "fail" if witness else "pass", witness, res)


# top-degree correspondence ------------------------------------------------------

def _aut_marked(G: StableGraph, marked: set[int]) -> int:
    """Half-edge automorphisms fixing legs and mapping marked edges to marked edges."""
    nh = 2 * G.n_edges
    owner = [G.halfedge_vertex(h) for h in range(nh)]
    nv = G.n_vertices
    count = 0
    for sigma in permutations(range(nv)):
        if any(G.genera[v] != G.genera[sigma[v]] or G.legs[v] != G.legs[sigma[v]] for v in range(nv)):
            continue

        def extend(h: int, image: dict) -> int:
            if h == nh:
                return 1
            if h in image:
                return extend(h + 1, image)
            total = 0
            used = set(image.values())
            for x in range(nh):
                y = x ^ 1
                if x in used or y in used:
                    continue
                if owner[x] != sigma[owner[h]] or owner[y] != sigma[owner[h ^ 1]]:
                    continue
                if ((h // 2) in marked) != ((x // 2) in marked):
                    continue
                image[h], image[h ^ 1] = x, y
                total += extend(h + 1, image)
                del image[h], image[h ^ 1]
            return total

        count += extend(0, {})
    return count


def orbit_count(G2: StableGraph, n: int, m: int) -> int:
    """Distinct leg-labeled graphs among the 2^m m! relabelings of the twist legs."""
    seen = set()
    for perm in permutations(range(m)):
        for flips in product((0, 1), repeat=m):
            mapping = {i: i for i in range(1, n + 1)}
            for j in range(m):
                src = (n + 2 * j + 1, n + 2 * j + 2)
                tgt = (n + 2 * perm[j] + 1, n + 2 * perm[j] + 2)
                if flips[j]:
                    tgt = tgt[::-1]
                mapping[src[0]], mapping[src[1]] = tgt
            seen.add(canonical_form(G2.relabel_markings(mapping)))
    return len(seen)


def orbit_formula(G2: StableGraph, n: int, m: int) -> Fraction:
    """2^m m! |Aut G2| / |Aut(G, S)| with G the glued graph and S the new edges."""
    G = G2
    for k in reversed(range(m)):
        G = glue_legs(G, n + 2 * k + 1, n + 2 * k + 2)
    marked = set(range(G.n_edges - m, G.n_edges))
    return Fraction(2 ** m * factorial(m) * automorphism_order(G2), _aut_marked(G, marked))


def topdeg_global_sides(g: int, n: int, c_max: int, check_orbits: bool = True) -> tuple[FineTable, FineTable, int]:
    lhs = assemble_dr(g, n, c_max).to_fine()
    rhs = FineTable()
    orbits = 0
    for m in range(0, min(g, c_max) + 1):
        spec = twisted_spec(g, n, m)
        t = assemble_dr(g - m, n + 2 * m, c_max - m, flavor="top", spec=spec)

        def reg(s, p):
            for i in range(1, m + 1):
                k = f"k{i}"
                p = substitute_powers(p * MultiPoly.var(k), k, "zeta", strict=True)
            return poly_normalize(p, spec.relation)

        t = t.map(reg)
        if check_orbits and m:
            seen = set()
            for s, _ in t:
                key = canonical_form(s.graph)
                if key in seen:
                    continue
                seen.add(key)
                direct, closed = orbit_count(s.graph, n, m), orbit_formula(s.graph, n, m)
                if direct != closed:
                    raise AssertionError(f"orbit count {direct} != {closed} for {s.graph}")
                orbits += 1
        part = glue_table(t.to_fine(), n + 1, m).scaled(Fraction(1, 2 ** m * factorial(m)))
        rhs = rhs + part
    return lhs, rhs, orbits


def check_topdeg_global(g: int, n: int, c_max: int) -> CheckReport:
    res: dict = {}
    with timed(res):
        lhs, rhs, orbits = topdeg_global_sides(g, n, c_max)
        witness = table_witness(lhs, rhs)
    res["strata"] = len(lhs)
    res["orbit_checks"] = orbits
    return CheckReport("topdeg_global", {"g": g, "n": n, "codim": c_max}, "fail" if witness else "pass", witness, res)


# forgetful pushforward -----------------------------------------------------------

def push_sides(g: int, n: int, c: int) -> tuple[FineTable, FineTable, FineTable]:
    """(order-0-and-1 residue, quotient at a_{n+1} = b, (g+1-c) DR^{c-1}) in the fine basis."""
    if n < 1:
        raise ValueError("needs n >= 1")
    F = forget_pushforward(assemble_dr(g, n + 1, c).codim_part(c))
    b, t = MultiPoly.var("b"), MultiPoly.var("t")
    an = f"a{n + 1}"
    low = FineTable()
    quot = FineTable()
    for s, p in F:
        q = p.subs({an: b + t})
        low.add(s, q.coeff_of("t", 0) + q.coeff_of("t", 1) * t)
        quot.add(s, q.coeff_of("t", 2))
    target = assemble_dr(g, n, c - 1).codim_part(c - 1).to_fine().scaled(g + 1 - c)
    return low, quot, target


def check_dr_push(g: int, n: int, c: int) -> CheckReport:
    res: dict = {}
    with timed(res):
        low, quot, target = push_sides(g, n, c)
        witness = None
        if not low.is_zero():
            s, p = next(iter(low))
            witness = poly_witness(p, MultiPoly.zero(), f"not divisible by (a{n + 1}-b)^2 at {s.describe()}")
        if not witness:
            witness = table_witness(quot, target)
    res["strata"] = len(quot)
    # beyond c = g + 1 the identity relies on relations we do not impose
    asserted = c <= g + 1
    return CheckReport("dr_push", {"g": g, "n": n, "codim": c}, "fail" if witness else "pass", witness, res, asserted)


def check_dr_push_numeric(g: int, n: int, c: int, b: int = 1, others: Sequence[int] | None = None) -> CheckReport:
    """Numeric route: sweep a_{n+1}, push numeric tables, interpolate in a_{n+1}."""
    if n < 1:
        raise ValueError("needs n >= 1")
    others = list(others) if others is not None else [2 + i for i in range(n - 1)]  # a_2..a_n
    res: dict = {}
    with timed(res):
        npts = 2 * c + 3
        xs = [b + j - (npts // 2) for j in range(npts)]
        samples: dict = {}
        reps: dict = {}
        for x in xs:
            a1 = (2 * g - 1 + n) * b - sum(others) - x
            spec = SpecializationData.numeric(b, [a1] + others + [x])
            F = forget_pushforward(assemble_dr(g, n + 1, c, spec=spec).codim_part(c))
            for s, p in F:
                key, rep = s.canonical()
                reps[key] = rep
                samples.setdefault(key, {})[x] = p.constant_term()
        a1 = (2 * g - 2 + n) * b - sum(others)
        spec0 = SpecializationData.numeric(b, [a1] + others)
        target = assemble_dr(g, n, c - 1, spec=spec0).codim_part(c - 1).to_fine().scaled(g + 1 - c)
        quot = FineTable()
        witness = None
        for key, vals in samples.items():
            ys = [vals.get(x, 0) for x in xs]
            fit = fit_univariate(xs[:-2], ys[:-2])
            poly = MultiPoly.from_monomials([({"x": i}, cf) for i, cf in enumerate(fit)])
            for x, y in zip(xs[-2:], ys[-2:]):
                if poly.evaluate({"x": x}) != y:
                    witness = f"{reps[key].describe()}: interpolation fails at a{n + 1}={x}"
            shifted = poly.subs({"x": MultiPoly.var("t") + b})
            for k in range(2):
                if shifted.coeff_of("t", k).constant_term() != 0:
                    witness = witness or f"{reps[key].describe()}: not divisible by (a{n + 1}-b)^2"
            quot.add(reps[key], shifted.coeff_of("t", 2))
            if witness:
                break
        if not witness:
            witness = table_witness(quot, target)
    res["samples"] = len(xs)
    return CheckReport("dr_push_numeric", {"g": g, "n": n, "codim": c, "b": b, "others": others}, "fail" if witness else "pass", witness, res)
