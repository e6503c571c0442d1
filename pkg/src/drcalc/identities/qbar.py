"""The congruences for the local functions Q-bar and Q-hat at a bubble.

Variables: k (the charge A), T, r, and p, q for psi, psi' at the two
ends of the edge.  Series are polynomials truncated in the total
(p, q)-degree; every division by p, q or p + q is checked to be exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..exactmath import MultiPoly
from .report import CheckReport, poly_witness, timed

V = MultiPoly.var


def _pq_degree(mono: dict) -> int:
    return mono.get("p", 0) + mono.get("q", 0)


def _trunc(P: MultiPoly, N: int) -> MultiPoly:
    return MultiPoly.from_monomials([(m, c) for m, c in P.items() if _pq_degree(m) <= N])


def _exp(arg: MultiPoly, N: int) -> MultiPoly:
    """exp(arg) for arg linear in (p, q), up to (p, q)-degree N."""
    out = MultiPoly.one()
    power = MultiPoly.one()
    for j in range(1, N + 1):
        power = _trunc(power * arg, N)
        out = out + power * Fraction(1, factorial(j))
    return out


def _divided_difference(x: MultiPoly, y: MultiPoly, var: MultiPoly, N: int) -> MultiPoly:
    """(e^{x var} - e^{y var}) / var up to degree N in var's (p, q)-grading."""
    out = MultiPoly.zero()
    xp, yp, vp = MultiPoly.one(), MultiPoly.one(), MultiPoly.one()
    for j in range(1, N + 2):
        xp, yp = xp * x, yp * y
        out = out + (xp - yp) * vp * Fraction(1, factorial(j))
        vp = _trunc(vp * var, N)
    return _trunc(out, N)


def _divide_monomial(P: MultiPoly, var: str) -> MultiPoly:
    items = []
    for m, c in P.items():
        if m.get(var, 0) < 1:
            raise ArithmeticError(f"not divisible by {var}")
        m = dict(m)
        m[var] -= 1
        items.append((m, c))
    return MultiPoly.from_monomials(items)


def _divide_sum(P: MultiPoly) -> MultiPoly:
    """Exact quotient by p + q, homogeneous (p, q)-component by component."""
    out = MultiPoly.zero()
    top = max((_pq_degree(m) for m, _ in P.items()), default=-1)
    for d in range(top + 1):
        comp = {}
        for m, c in P.items():
            if _pq_degree(m) == d:
                rest = {v: k for v, k in m.items() if v not in ("p", "q")}
                i = m.get("p", 0)
                comp[i] = comp.get(i, MultiPoly.zero()) + MultiPoly.from_monomials([(rest, c)])
        if not comp:
            continue
        # sum c_i p^i q^(d-i) = (p + q) sum b_i p^i q^(d-1-i)
        bq = {}
        prev = MultiPoly.zero()
        for i in range(d, 0, -1):
            bq[i - 1] = comp.get(i, MultiPoly.zero()) - prev
            prev = bq[i - 1]
        if comp.get(0, MultiPoly.zero()) != prev:
            raise ArithmeticError("not divisible by p + q")
        for i, c in bq.items():
            out = out + c * V("p") ** i * V("q") ** (d - 1 - i)
    return out


def qbar_series(N: int) -> MultiPoly:
    """Q-bar up to (p, q)-degree N."""
    k, T, r, p, q = V("k"), V("T"), V("r"), V("p"), V("q")
    s = p + q
    x = (k - T + r) ** 2 * Fraction(1, 2)
    y = (k - T) ** 2 * Fraction(1, 2)
    z = k * k * Fraction(1, 2)
    E1 = _divided_difference(x, y, s, N + 1)
    E2 = _divided_difference(x, y, p, N + 1)
    num = _trunc(-E1 + _exp(z * q, N + 1) * E2, N + 1)
    return _trunc(_divide_monomial(num, "q"), N)


def qhat_series(N: int) -> MultiPoly:
    """Q-hat (the bracket [A - T]_r replaced by A - T) up to (p, q)-degree N."""
    k, T, p, q = V("k"), V("T"), V("p"), V("q")
    s = p + q
    y = (k - T) ** 2 * Fraction(1, 2)
    z = k * k * Fraction(1, 2)
    M = N + 3
    num = -q * _exp(z * s, M) + s * _exp(y * p + z * q, M) - p * _exp(y * s, M)
    num = _trunc(num, M)
    return _trunc(_divide_sum(_divide_monomial(_divide_monomial(num, "p"), "q")), N)


def check_qbar(N: int = 6) -> list[CheckReport]:
    reports = []
    k, T, p, q = V("k"), V("T"), V("p"), V("q")
    s = p + q
    z = k * k * Fraction(1, 2)
    res: dict = {}
    with timed(res):
        Q = qbar_series(N)
        witness = None
        at_r0 = Q.subs({"r": 0})
        if not at_r0.is_zero():
            witness = poly_witness(at_r0, MultiPoly.zero(), "Q-bar at r = 0")
        else:
            over_r = _divide_monomial(Q, "r").subs({"r": 0})
            low = over_r.coeff_of("T", 0) + over_r.coeff_of("T", 1) * T
            want = _trunc(k * k * _exp(z * s, N) * T, N)
            witness = poly_witness(low, want, "Q-bar/r mod (r, T^2)")
    reports.append(CheckReport("qbar", {"order": N}, "fail" if witness else "pass", witness, res))

    res = {}
    with timed(res):
        Qh = qhat_series(N)
        low = sum((Qh.coeff_of("T", j) * T ** j for j in range(3)), MultiPoly.zero())
        want = _trunc(T * T * (-z) * _exp(z * s, N), N)
        witness = poly_witness(low, want, "Q-hat mod T^3")
        if not witness:
            # -z e^{z s} = (1 + [codim]) (1 - e^{z s}) / s
            f = _divide_sum(_trunc(MultiPoly.one() - _exp(z * s, N + 1), N + 1))
            g = MultiPoly.zero()
            for d in range(N + 1):
                part = MultiPoly.from_monomials([(m, c) for m, c in f.items() if _pq_degree(m) == d])
                g = g + part * (1 + d)
            witness = poly_witness(g, _trunc(-z * _exp(z * s, N), N), "codim form")
    reports.append(CheckReport("qhat", {"order": N}, "fail" if witness else "pass", witness, res))
    return reports
