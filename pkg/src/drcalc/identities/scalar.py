"""The four one- and two-variable series identities behind the twist sums.

Left and right sides are computed by different routes: Bernoulli and
zeta values on one side, series inversion of (e^u - 1)/u on the other.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from ..exactmath import MultiPoly, TruncSeries, bernoulli, compose_univariate, exp_of, inverse_of, laurent_invert_linear, zeta_reg
from .report import CheckReport, timed


def _lin(svars, coeffs: dict[int, int], ceil) -> TruncSeries:
    terms = {}
    for i, c in coeffs.items():
        e = [0] * len(svars)
        e[i] = 1
        terms[tuple(e)] = {(): c}
    return TruncSeries(svars, (), terms, None, None, ceil)


def _shift(s: TruncSeries, i: int, k: int) -> TruncSeries:
    move = lambda b: None if b is None else b + k
    terms = {}
    for e, c in s.terms.items():
        f = list(e)
        f[i] += k
        terms[tuple(f)] = c
    floor = tuple(move(b) if j == i else b for j, b in enumerate(s.floor))
    ceil = tuple(move(b) if j == i else b for j, b in enumerate(s.ceil))
    return TruncSeries(s.svars, s.cvars, terms, None, floor, ceil)


def _todd(u: TruncSeries) -> TruncSeries:
    """u/(e^u - 1) as the inverse of (e^u - 1)/u, without Bernoulli numbers."""
    return inverse_of(compose_univariate(lambda j: Fraction(1, factorial(j + 1)), u))


def g_series(N: int, var: str = "U") -> list[Fraction]:
    """Coefficients U^0..U^N of e^U/(e^U-1)^2 - 1/U^2 by series inversion."""
    ceil = (N + 2,)
    U = _lin((var,), {0: 1}, ceil)
    W = compose_univariate(lambda j: Fraction(1, factorial(j + 1)), U)
    inv = inverse_of(W * W)
    E = exp_of(U)
    R = E * inv
    return [Fraction(R.coefficient_at((d + 2,)).constant_term()) for d in range(N + 1)]


def identity_zeta_exp(N: int) -> list[tuple[int, Fraction, Fraction]]:
    """(d, lhs, rhs): [exp(kU)]_{k^d -> zeta(-d-1)} against the series above."""
    rhs = g_series(N)
    return [(d, zeta_reg(d) / factorial(d), rhs[d]) for d in range(N + 1)]


def _x_pole_product(N: int, with_b_minus_one: bool) -> TruncSeries:
    """X/(X+Y) times B(X+Y) (or B(X+Y) - 1), expanded with X leading, up to X^2 Y^N."""
    svars = ("X", "Y")
    inv = laurent_invert_linear(MultiPoly.parse("X + Y"), svars, floor=(-1 - N, 0), ceil=(-1, N))
    num_ceil = (N + 3, N)
    # B(X+Y) from the univariate inverse, expanded binomially
    top = 2 * N + 3
    b = _todd(_lin(("u",), {0: 1}, (top,)))
    terms = {}
    for n in range(top + 1):
        bn = Fraction(b.coefficient_at((n,)).constant_term())
        if bn:
            for a in range(max(0, n - N), min(n, N + 2) + 1):
                terms[(a, n - a)] = {(): bn * comb(n, a)}
    B = TruncSeries(svars, (), terms, None, None, (N + 2, N))
    if with_b_minus_one:
        B = B - TruncSeries(svars, (), {(0, 0): {(): 1}}, None, None, B.ceil)
    num = _shift(B, 0, 1).with_window(ceil=num_ceil)
    return inv.mul(num, ceil=(2, N))


def identity_x_pole(N: int) -> list[tuple[int, Fraction, Fraction]]:
    """(i, lhs, rhs): [X/(e^{X+Y}-1) - X/(X+Y)]_{X^2} against -(e^Y/(e^Y-1)^2 - 1/Y^2)."""
    F = _x_pole_product(N, True)
    rhs = g_series(N, "Y")
    return [(i, Fraction(F.coefficient_at((2, i)).constant_term()), -rhs[i]) for i in range(N + 1)]


def identity_bernoulli_shift(N: int) -> list[tuple[int, Fraction, Fraction]]:
    """(d, lhs, rhs): [exp(kT)]_{k^d -> -B_{d+2}} against -(d/dT)^2 T/(e^T-1)."""
    T = _lin(("T",), {0: 1}, (N + 2,))
    D2 = _todd(T).derivative("T").derivative("T")
    return [(d, -bernoulli(d + 2) / factorial(d), -Fraction(D2.coefficient_at((d,)).constant_term())) for d in range(N + 1)]


def identity_euler(N: int) -> list[tuple[int, Fraction, Fraction]]:
    """(i, lhs, 0): X^2 Y^i coefficient of (X d/dX + Y d/dY) X/(e^{X+Y}-1) - X^2 (d/dY)^2 Y/(e^Y-1)."""
    F = _x_pole_product(N, False)
    euler = _shift(F.derivative("X"), 0, 1) + _shift(F.derivative("Y"), 1, 1)
    Y = _lin(("Y",), {0: 1}, (N + 2,))
    YB = _todd(Y).derivative("Y").derivative("Y")
    out = []
    for i in range(N + 1):
        val = Fraction(euler.coefficient_at((2, i)).constant_term()) - Fraction(YB.coefficient_at((i,)).constant_term())
        out.append((i, val, Fraction(0)))
    return out


IDENTITIES = {
    "zeta_exp": identity_zeta_exp,
    "x_pole": identity_x_pole,
    "bernoulli_shift": identity_bernoulli_shift,
    "euler_vanishing": identity_euler,
}


def check_scalar_identities(N: int = 20) -> list[CheckReport]:
    if N < 4:
        raise ValueError("series order must be at least 4")
    reports = []
    for name, fn in IDENTITIES.items():
        res: dict = {}
        with timed(res):
            rows = fn(N)
        witness = None
        for d, lhs, rhs in rows:
            if lhs != rhs:
                witness = f"order {d}: lhs={lhs} rhs={rhs}"
                break
        res["terms"] = len(rows)
        reports.append(CheckReport(f"scalar.{name}", {"N": N}, "fail" if witness else "pass", witness, res))
    return reports
