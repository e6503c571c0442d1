"""Reference evaluator: enumerate weightings mod r, then interpolate.

For a fixed spanning tree the residues on the tails of the non-tree
edges are free and every tree-edge residue is an affine function of
them, so W_{G,r} is enumerated as a grid of r^h1 points with numpy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactmath import MultiPoly, fit_univariate
from ..exactmath.interp import eval_univariate, interpolate_simplex, simplex_points
from ..graphcore import StableGraph, cycle_data, h1, spanning_trees

MAX_GRID = 4_000_000
_SAFE = 2 ** 62


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class _Layout:
    tree_edges: tuple[int, ...]
    free_edges: tuple[int, ...]
    # for each tree edge: vertex set and coefficient row on the free residues
    head_sets: tuple[frozenset[int], ...]
    rows: np.ndarray


def _layout(G: StableGraph) -> _Layout:
    key = "oracle_layout"
    if key in G._cache:
        return G._cache[key]
    tree = spanning_trees(G)[0]
    cd = cycle_data(G, tree)
    free = tuple(e for e in range(G.n_edges) if e not in tree)
    rows = np.zeros((len(tree), len(free)), dtype=np.int64)
    heads = []
    for a, e in enumerate(tree):
        H = cd.head_side[e]
        heads.append(H)
        for b, f in enumerate(free):
            t, h = G.edges[f]
            if t in H and h not in H:
                rows[a, b] = 1
            elif h in H and t not in H:
                rows[a, b] = -1
    lay = _Layout(tuple(tree), free, tuple(heads), rows)
    G._cache[key] = lay
    return lay


def weighting_sum(G: StableGraph, charges: Sequence[int], r: int) -> Fraction:
    """r^(-h1) * sum over weightings w mod r of prod_e w(h)w(h')/2."""
    charges = [int(c) for c in charges]
    if len(charges) != G.n_vertices:
        raise ValueError("one charge per vertex required")
    if sum(charges) != 0:
        raise ValueError("charges must sum to zero")
    if r < 2:
        raise ValueError("modulus must be at least 2")
    lay = _layout(G)
    k = len(lay.free_edges)
    if r ** k > MAX_GRID:
        raise OracleError(f"r^h1 = {r ** k} exceeds the enumeration budget")
    ne = G.n_edges
    if ne == 0:
        return Fraction(1)
    if k:
        grid = np.indices((r,) * k, dtype=np.int64).reshape(k, -1)
    else:
        grid = np.zeros((0, 1), dtype=np.int64)
    npts = grid.shape[1]
    # residue on the tail half-edge of every edge
    tails = np.empty((ne, npts), dtype=np.int64)
    for b, f in enumerate(lay.free_edges):
        tails[f] = grid[b]
    for a, e in enumerate(lay.tree_edges):
        aH = sum(charges[v] for v in lay.head_sets[a])
        tails[e] = (aH + lay.rows[a] @ grid) % r
    factors = tails * (r - tails)
    biggest = (r * r // 4) ** ne
    if biggest < _SAFE:
        prod = np.ones(npts, dtype=np.int64)
        for row in factors:
            prod *= row
        chunk = max(1, _SAFE // max(biggest, 1))
        total = 0
        for s in range(0, npts, chunk):
            total += int(prod[s:s + chunk].sum())
    else:
        prod = np.ones(npts, dtype=object)
        for row in factors:
            prod = prod * row.astype(object)
        total = int(sum(prod))
    return Fraction(total, 2 ** ne * r ** k)


def constant_in_r(G: StableGraph, charges: Sequence[int], r0: int | None = None, extra: int = 2, escalations: int = 4) -> tuple[Fraction, int]:
    """[r^(-h1) sum_w ...]_{r=0}, from a polynomial fit with validation points.

    Returns (value, R0 used).
    """
    ne = G.n_edges
    deg = 2 * ne
    amax = max((abs(c) for c in charges), default=0)
    if r0 is None:
        r0 = 4 * ne * amax + 5
    for _ in range(escalations):
        rs = list(range(r0, r0 + deg + 1 + extra))
        ys = [weighting_sum(G, charges, r) for r in rs]
        coeffs = fit_univariate(rs[: deg + 1], ys[: deg + 1])
        if all(eval_univariate(coeffs, r) == y for r, y in zip(rs[deg + 1:], ys[deg + 1:])):
            return coeffs[0], r0
        r0 *= 2
    raise OracleError("weighting sums did not behave polynomially in r; R0 too small")


def charge_vars(nv: int) -> list[str]:
    return [f"x{v}" for v in range(nv)]


def _best_shift(nfree: int, deg: int) -> int:
    def worst(s: int) -> int:
        return max(s, deg - s, abs(s * nfree), abs(deg - s * nfree))
    return min(range(deg + 1), key=worst)


def cg_oracle_poly(G: StableGraph, seed: int = 0, checks: int = 3) -> tuple[MultiPoly, dict]:
    """C(G) in x0..x_{V-2} (x_{V-1} = -sum of the others), with provenance."""
    nv = G.n_vertices
    deg = 2 * G.n_edges
    h1(G)
    names = charge_vars(nv)[:-1]
    nfree = nv - 1
    s = _best_shift(nfree, deg)
    shift = (-s,) * nfree
    r0s = set()

    def value(point: Sequence[int]) -> Fraction:
        charges = list(point) + [-sum(point)]
        v, r0 = constant_in_r(G, charges)
        r0s.add(r0)
        return v

    vals = {}
    for c in simplex_points(nfree, deg):
        vals[c] = value(tuple(a + b for a, b in zip(shift, c)))
    poly = interpolate_simplex(vals, names, deg, shift)
    rng = random.Random(seed)
    bound = deg + 1
    for _ in range(checks if nfree else 0):
        pt = tuple(rng.randint(-bound, bound) for _ in range(nfree))
        if poly.evaluate(dict(zip(names, pt))) != value(pt):
            raise OracleError(f"interpolation failed validation at charges {pt}")
    prov = {
        "grid_points": len(vals),
        "shift": -s,
        "validation_points": checks if nfree else 0,
        "r0_min": min(r0s) if r0s else None,
        "r0_max": max(r0s) if r0s else None,
        "r_samples": deg + 3,
    }
    return poly.trim() if poly else MultiPoly.zero(), prov
