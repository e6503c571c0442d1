"""Exact polynomial interpolation on integer grids."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Callable, Sequence

from .poly import MultiPoly, Scalar


def fit_univariate(xs: Sequence[Scalar], ys: Sequence[Scalar]) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial, by Newton divided differences."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("need matching, nonempty samples")
    if len(set(xs)) != len(xs):
        raise ValueError("sample points must be distinct")
    xs = [Fraction(x) for x in xs]
    dd = [Fraction(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # coeffs <- coeffs * (x - xs[i]) + dd[i]
        nxt = [Fraction(0)] * n
        for k in range(n - 1):
            nxt[k + 1] += coeffs[k]
        for k in range(n):
            nxt[k] -= coeffs[k] * xs[i]
        nxt[0] += dd[i]
        coeffs = nxt
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def eval_univariate(coeffs: Sequence[Fraction], x: Scalar) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def value_at_zero(xs: Sequence[Scalar], ys: Sequence[Scalar]) -> Fraction:
    return fit_univariate(xs, ys)[0]


def simplex_points(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All c in N^nvars with sum(c) <= degree, in lexicographic order."""
    return [c for c in product(range(degree + 1), repeat=nvars) if sum(c) <= degree]


def _binom_poly(name: str, shift: int, k: int) -> MultiPoly:
    y = MultiPoly.var(name) - shift
    out = MultiPoly.one()
    for j in range(k):
        out = out * (y - j)
    return out * Fraction(1, factorial(k))


def interpolate_simplex(
    values: dict[tuple[int, ...], Scalar],
    names: Sequence[str],
    degree: int,
    shift: Sequence[int] | None = None,
) -> MultiPoly:
    """Polynomial of total degree <= ``degree`` through values at shift + simplex points.

    ``values`` is keyed by the simplex offset c (not the shifted point).
    Uses multivariate forward differences, so the system is never singular.
    """
    n = len(names)
    shift = tuple(shift) if shift is not None else (0,) * n
    pts = simplex_points(n, degree)
    missing = [c for c in pts if c not in values]
    if missing:
        raise ValueError(f"missing {len(missing)} interpolation values")
    table = {c: Fraction(values[c]) for c in pts}
    for axis in range(n):
        # forward differences along this axis, line by line
        lines: dict[tuple, list[tuple[int, ...]]] = {}
        for c in pts:
            lines.setdefault(c[:axis] + c[axis + 1:], []).append(c)
        for members in lines.values():
            members.sort(key=lambda c: c[axis])
            seq = [table[c] for c in members]
            diffs = []
            for _ in range(len(seq)):
                diffs.append(seq[0])
                seq = [b - a for a, b in zip(seq, seq[1:])]
            for c, d in zip(members, diffs):
                table[c] = d
    cache: dict[tuple[int, int], MultiPoly] = {}
    out = MultiPoly.zero()
    for alpha, d in table.items():
        if not d:
            continue
        term = MultiPoly.const(d)
        for i, k in enumerate(alpha):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = _binom_poly(names[i], shift[i], k)
                term = term * cache[key]
        out = out + term
    return out


def interpolate_function(
    f: Callable[[tuple[int, ...]], Scalar],
    names: Sequence[str],
    degree: int,
    shift: Sequence[int] | None = None,
) -> MultiPoly:
    n = len(names)
    shift = tuple(shift) if shift is not None else (0,) * n
    vals = {c: f(tuple(s + k for s, k in zip(shift, c))) for c in simplex_points(n, degree)}
    return interpolate_simplex(vals, names, degree, shift)


def count_simplex(nvars: int, degree: int) -> int:
    return comb(nvars + degree, degree)
