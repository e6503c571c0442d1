"""Spanning-tree evaluation of C(G) and its top-degree part.

Per tree T the summand is

    prod_{e in T} exp(a_{e,T} z_e) * prod_{e not in T} N_e / z_{e,T}

with a numerator N_e depending on the *kind*:

* ``full``: N_e = z_e * B(z_{e,T}),  B(u) = u/(e^u - 1)
* ``top``:  N_e = z_e
* ``rhs``:  N_e = z_e - z_e^2 z_{e,T} G(z_{e,T} - z_e),
  G(U) = e^U/(e^U - 1)^2 - 1/U^2, the per-edge replacement obtained
  by summing the regularized twist contributions

C is (-1)^|E| times the coefficient of prod z_e^2 in the sum over T.

Strategies:

* ``laurent``: iterated Laurent expansion with exact windows, charges
  carried as extra integer exponent slots and substituted at the end
* ``laurent-series``: the same expansion with charge polynomials as
  coefficients; slower, kept as an independent reference
* ``division``: clear denominators, divide exactly by each z_{e,T}
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, lcm
from typing import Mapping, Sequence

from ..exactmath import MultiPoly, bernoulli
from ..exactmath.poly import sort_vars
from ..exactmath.series import (
    FlatFactor,
    InverseLinear,
    PoleFactor,
    PowerFactor,
    TruncSeries,
    compose_univariate,
    flat_product_coefficient,
    inverse_terms,
    product_coefficient,
)
from ..graphcore import StableGraph, cycle_data, spanning_trees

KINDS = ("full", "top", "rhs")
STRATEGIES = ("laurent", "division", "laurent-series")


class ZagierError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def g_coeff(d: int) -> Fraction:
    """Coefficient of U^d in e^U/(e^U-1)^2 - 1/U^2."""
    return -(d + 1) * bernoulli(d + 2) / factorial(d + 2)


@lru_cache(maxsize=None)
def bgf_coeff(d: int) -> Fraction:
    return bernoulli(d) / factorial(d)


def zvars(ne: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(ne))


def default_charges(nv: int) -> list[MultiPoly]:
    xs = [MultiPoly.var(f"x{v}") for v in range(nv - 1)]
    last = MultiPoly.zero()
    for x in xs:
        last = last - x
    return xs + [last]


def _tree_sets(G: StableGraph):
    key = "zagier_trees"
    if key not in G._cache:
        G._cache[key] = [cycle_data(G, T) for T in spanning_trees(G)]
    return G._cache[key]


def _head_charge(charges: Sequence[MultiPoly], verts) -> MultiPoly:
    acc = MultiPoly.zero()
    for v in sorted(verts):
        acc = acc + charges[v]
    return acc


# Laurent strategy ---------------------------------------------------------------

def _exp_factor(e: int, a: MultiPoly, svars) -> PowerFactor:
    n = len(svars)

    def build(floor, ceil):
        terms = {}
        power = MultiPoly.one()
        cv = sort_vars(a.vars)
        for j in range(ceil[e] + 1):
            if j >= max(floor[e], 0):
                s = [0] * n
                s[e] = j
                terms[tuple(s)] = (power * Fraction(1, factorial(j))).with_vars(cv)
            power = power * a
        return TruncSeries(svars, cv, terms, None, floor, ceil)

    lows = tuple(0 for _ in range(n))
    return PowerFactor(build, lows, frozenset([e]))


def _numerator_factor(e: int, form: Mapping[int, int], kind: str, svars) -> PowerFactor:
    n = len(svars)
    support = frozenset(form)
    rest = {f: s for f, s in form.items() if f != e}

    def lin(coeffs: Mapping[int, int], floor, ceil) -> TruncSeries:
        terms = {}
        for f, s in coeffs.items():
            v = [0] * n
            v[f] = 1
            terms[tuple(v)] = {(): s}
        return TruncSeries(svars, (), terms, None, None, ceil)

    def shifted(s: TruncSeries, k: int, floor, ceil) -> TruncSeries:
        terms = {}
        for sexp, c in s.terms.items():
            t = list(sexp)
            t[e] += k
            terms[tuple(t)] = c
        return TruncSeries(svars, (), terms, None, floor, ceil)

    def lowered(ceil, k):
        c = list(ceil)
        c[e] -= k
        return tuple(c)

    def build(floor, ceil):
        x_only = {tuple(1 if i == e else 0 for i in range(n)): {(): 1}}
        X = TruncSeries(svars, (), x_only, None, floor, ceil)
        if kind == "top":
            return X
        if kind == "full":
            c1 = lowered(ceil, 1)
            if c1[e] < 0:
                return TruncSeries(svars, (), {}, None, floor, ceil)
            L = lin(form, floor, c1)
            B = compose_univariate(bgf_coeff, L)
            return shifted(B, 1, floor, ceil)
        if kind == "rhs":
            c2 = lowered(ceil, 2)
            if c2[e] < 0:
                return X
            if rest:
                U = lin(rest, floor, c2)
                Gs = compose_univariate(g_coeff, U)
            else:
                Gs = TruncSeries(svars, (), {(0,) * n: {(): g_coeff(0)}}, None, None, c2)
            L = lin(form, floor, c2)
            LG = L.mul(Gs, ceil=c2)
            return X - shifted(LG, 2, floor, ceil)
        raise ValueError(f"unknown kind {kind!r}")

    lows = tuple(1 if i == e else 0 for i in range(n))
    return PowerFactor(build, lows, support)


def _tree_factors(G: StableGraph, cd, charges, kind: str, svars):
    factors = []
    for e in cd.tree:
        factors.append(_exp_factor(e, _head_charge(charges, cd.head_side[e]), svars))
    for e, form in cd.cycles.items():
        factors.append(_numerator_factor(e, form, kind, svars))
        factors.append(InverseLinear({f: Fraction(s) for f, s in form.items()}))
    return factors


def _laurent(G: StableGraph, charges, kind: str) -> MultiPoly:
    ne = G.n_edges
    svars = zvars(ne)
    target = (2,) * ne
    total = MultiPoly.zero()
    for cd in _tree_sets(G):
        total = total + product_coefficient(_tree_factors(G, cd, charges, kind, svars), svars, target)
    return total


# flat Laurent route: charges live in extra exponent slots --------------------

@lru_cache(maxsize=None)
def _int_table(coeff, jmax: int) -> tuple[list[int], int]:
    cs = [Fraction(coeff(j)) for j in range(jmax + 1)]
    d = lcm(*(c.denominator for c in cs))
    return [c.numerator * (d // c.denominator) for c in cs], d


def _composed(coeff, form: Mapping[int, int], n: int, floor, ceil, scale: int = 1) -> tuple[dict, int]:
    """sum_j coeff(j) L^j for the linear form L inside the window, as (integer terms, denominator)."""
    fs = sorted(form)
    if any(floor[i] > 0 for i in range(n) if i not in form) or any(ceil[f] < max(floor[f], 0) for f in fs):
        return {}, 1
    ints, d = _int_table(coeff, sum(ceil[f] for f in fs))
    if scale != 1:
        ints = [c * scale for c in ints]
    out = {}
    for ks in product(*(range(max(floor[f], 0), ceil[f] + 1) for f in fs)):
        j = sum(ks)
        c = ints[j]
        if not c:
            continue
        mult = factorial(j)
        for f, k in zip(fs, ks):
            mult = mult // factorial(k) * form[f] ** k
        x = [0] * n
        for f, k in zip(fs, ks):
            x[f] = k
        out[tuple(x)] = c * mult
    return out, d


def _merge(parts: list[tuple[dict, int]]) -> tuple[dict, int]:
    """Sum of (integer terms, denominator) pairs over a common denominator."""
    d = lcm(*(q for _, q in parts))
    out: dict = {}
    for terms, q in parts:
        k = d // q
        for x, c in terms.items():
            out[x] = out.get(x, 0) + c * k
    return {x: c for x, c in out.items() if c}, d


def _shift(d: dict, e: int, k: int) -> dict:
    out = {}
    for x, c in d.items():
        y = list(x)
        y[e] += k
        out[tuple(y)] = c
    return out


def _flat_exp(e: int, slot: int, n: int, m: int) -> FlatFactor:
    def build(floor, ceil):
        top = max(ceil[e], 0)
        out = {}
        for k in range(max(floor[e], 0), ceil[e] + 1):
            x = [0] * (n + m)
            x[e] = k
            x[n + slot] = k
            out[tuple(x)] = factorial(top) // factorial(k)
        return out, factorial(top)

    return FlatFactor(build, tuple(0 for _ in range(n)), frozenset([e]))


def bgf_next_coeff(d: int) -> Fraction:
    """Coefficients of (B(u) - B(0)) / u."""
    return bgf_coeff(d + 1)


_C0 = {"full": Fraction(bgf_coeff(0)), "top": Fraction(1), "rhs": Fraction(1)}


def _flat_pole(e: int, form: Mapping[int, int], kind: str, n: int, m: int) -> PoleFactor:
    """N_e / L_e split as c z_e / L_e plus a regular part.

    full: z_e B(L)/L = B(0) z_e/L + z_e (B(L) - B(0))/L
    top:  z_e/L
    rhs:  z_e/L - z_e^2 G(U), with U the rest of L
    """
    pad = (0,) * m
    rest = {f: c for f, c in form.items() if f != e}
    coeffs = dict(form)

    def lowered(w, k):
        c = list(w)
        c[e] -= k
        return tuple(c)

    def build(floor, ceil):
        c0 = _C0.get(kind, Fraction(1))
        t, d = inverse_terms(coeffs, n, lowered(floor, 1), lowered(ceil, 1))
        parts = [({x: c * c0.numerator for x, c in _shift(t, e, 1).items()}, d * c0.denominator)]
        if kind == "full":
            t, d = _composed(bgf_next_coeff, form, n, lowered(floor, 1), lowered(ceil, 1))
            parts.append((_shift(t, e, 1), d))
        elif kind == "rhs":
            t, d = _composed(g_coeff, rest, n, lowered(floor, 2), lowered(ceil, 2), -1)
            parts.append((_shift(t, e, 2), d))
        elif kind != "top":
            raise ValueError(f"unknown kind {kind!r}")
        body, d = _merge(parts)
        return {x + pad: c for x, c in body.items()}, d

    return PoleFactor(coeffs, e, build)


def _laurent_flat(G: StableGraph, charges, kind: str) -> MultiPoly:
    ne = G.n_edges
    target = (2,) * ne
    # coefficients keyed by the head-charge monomial, merged across trees
    merged: dict = {}
    for cd in _tree_sets(G):
        tree = list(cd.tree)
        m = len(tree)
        # charge-free factors first keeps the partial products small
        factors = []
        for e, form in cd.cycles.items():
            factors.append(_flat_pole(e, form, kind, ne, m))
        factors += [_flat_exp(e, j, ne, m) for j, e in enumerate(tree)]
        heads = [tuple(sorted(cd.head_side[e])) for e in tree]
        for ex, c in flat_product_coefficient(factors, ne, m, target).items():
            key = tuple(sorted((heads[j], k) for j, k in enumerate(ex) if k))
            merged[key] = merged.get(key, 0) + c
    names = {head: f"_h{i}" for i, head in enumerate(sorted({h for key in merged for h, _ in key}))}
    poly = MultiPoly.from_monomials([({names[h]: k for h, k in key}, c) for key, c in merged.items()])
    return poly.subs({name: _head_charge(charges, head) for head, name in names.items()})


# division strategy ------------------------------------------------------------------

def _zpoly(coeffs: Mapping[int, int]) -> MultiPoly:
    return MultiPoly.linear({f"z{f}": c for f, c in coeffs.items()})


def _canonical_form(form: Mapping[int, int]) -> tuple[tuple[tuple[int, int], ...], int]:
    lead = min(form)
    sign = 1 if form[lead] > 0 else -1
    return tuple(sorted((f, s * sign) for f, s in form.items())), sign


def _graded_numerator(e: int, form: Mapping[int, int], kind: str, top: int) -> list[MultiPoly]:
    """Homogeneous components (by z-degree) of N_e up to degree ``top``."""
    X = MultiPoly.var(f"z{e}")
    comps = [MultiPoly.zero() for _ in range(top + 1)]
    if top >= 1:
        comps[1] = X
    if kind == "top":
        return comps
    L = _zpoly(form)
    if kind == "full":
        power = MultiPoly.one()
        for j in range(1, top):
            power = power * L
            comps[j + 1] = comps[j + 1] + X * power * bgf_coeff(j)
        return comps
    if kind == "rhs":
        U = _zpoly({f: s for f, s in form.items() if f != e})
        base = X * X * L
        power = MultiPoly.one()
        for d in range(0, top - 2):
            comps[d + 3] = comps[d + 3] - base * power * g_coeff(d)
            power = power * U
        return comps
    raise ValueError(f"unknown kind {kind!r}")


def _graded_exp(e: int, a: MultiPoly, top: int) -> list[MultiPoly]:
    az = a * MultiPoly.var(f"z{e}")
    comps = [MultiPoly.one()]
    for j in range(1, top + 1):
        comps.append(comps[-1] * az * Fraction(1, j))
    return comps


def _convolve(parts: list[list[MultiPoly]], degree: int) -> MultiPoly:
    """Degree-``degree`` component of the product of graded factors."""
    acc = [MultiPoly.zero() for _ in range(degree + 1)]
    acc[0] = MultiPoly.one()
    for comps in parts:
        nxt = [MultiPoly.zero() for _ in range(degree + 1)]
        for i, a in enumerate(acc):
            if a.is_zero():
                continue
            for j, b in enumerate(comps):
                if i + j > degree:
                    break
                if not b.is_zero():
                    nxt[i + j] = nxt[i + j] + a * b
        acc = nxt
    return acc[degree]


def divide_linear(p: MultiPoly, form: Mapping[int, int]) -> MultiPoly:
    """Exact quotient p / L for a linear form L whose leading coefficient is 1."""
    lead = min(form)
    if form[lead] != 1:
        raise ValueError("leading coefficient must be 1")
    zm = f"z{lead}"
    R = _zpoly({f: s for f, s in form.items() if f != lead})
    top = p.degree(zm)
    if top < 0:
        return p
    q_parts: dict[int, MultiPoly] = {}
    # descending in powers of z_lead: Q_{k-1} = P_k - R Q_k
    for k in range(top, 0, -1):
        qk = q_parts.get(k, MultiPoly.zero())
        q_parts[k - 1] = p.coeff_of(zm, k) - R * qk
    rem = p.coeff_of(zm, 0) - R * q_parts.get(0, MultiPoly.zero())
    if not rem.is_zero():
        raise ZagierError("cleared denominator does not divide the numerator")
    zpow = MultiPoly.var(zm)
    out = MultiPoly.zero()
    power = MultiPoly.one()
    for k in range(0, top):
        out = out + q_parts[k] * power
        power = power * zpow
    return out


def _division(G: StableGraph, charges, kind: str) -> MultiPoly:
    ne = G.n_edges
    trees = _tree_sets(G)
    forms: dict[tuple, Mapping[int, int]] = {}
    for cd in trees:
        for form in cd.cycles.values():
            key, _ = _canonical_form(form)
            forms.setdefault(key, dict(key))
    total = MultiPoly.zero()
    for cd in trees:
        k_out = len(cd.cycles)
        deg = 2 * ne + k_out
        parts = []
        for e in cd.tree:
            parts.append(_graded_exp(e, _head_charge(charges, cd.head_side[e]), deg))
        used = set()
        sign = 1
        for e, form in cd.cycles.items():
            parts.append(_graded_numerator(e, form, kind, deg))
            key, s = _canonical_form(form)
            if key in used:
                raise ZagierError("two non-tree edges share a cycle form")
            used.add(key)
            sign *= s
        num = _convolve(parts, deg)
        for key, form in forms.items():
            if key not in used:
                num = num * _zpoly(form)
        total = total + num * sign
    for form in forms.values():
        total = divide_linear(total, form)
    return total


def coefficient_zz(p: MultiPoly, ne: int) -> MultiPoly:
    """Coefficient of prod_e z_e^2, as a polynomial in the remaining variables."""
    out = p
    for e in range(ne):
        out = out.coeff_of(f"z{e}", 2)
    return out


def zagier_value(
    G: StableGraph,
    kind: str = "full",
    strategy: str = "laurent",
    charges: Sequence[MultiPoly] | None = None,
) -> MultiPoly:
    """(-1)^|E| [sum_T ...]_{prod z_e^2} for the given vertex charges.

    Default charges are x0..x_{V-2} with x_{V-1} = -(x0 + ... + x_{V-2}).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not G.is_connected():
        raise ValueError("graph must be connected")
    nv = G.n_vertices
    if charges is None:
        charges = default_charges(nv)
    charges = [MultiPoly.coerce(c) for c in charges]
    if len(charges) != nv:
        raise ValueError("one charge per vertex required")
    if sum(charges, MultiPoly.zero()) != 0:
        raise ValueError("charges must sum to zero")
    ne = G.n_edges
    if ne == 0:
        return MultiPoly.one()
    if strategy == "laurent":
        val = _laurent_flat(G, charges, kind)
    elif strategy == "laurent-series":
        val = _laurent(G, charges, kind)
    else:
        val = coefficient_zz(_division(G, charges, kind), ne)
    val = val * (-1) ** ne
    return val.trim() if val else MultiPoly.zero()
