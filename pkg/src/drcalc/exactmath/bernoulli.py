"""Bernoulli numbers and the regularized power sums built from them."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .poly import MultiPoly

_TABLE: list[Fraction] = [Fraction(1)]
_LOCK = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """B_m with the convention B_1 = -1/2, i.e. u/(e^u - 1) = sum B_m u^m/m!."""
    if m < 0:
        raise ValueError("bernoulli index must be nonnegative")
    if m < len(_TABLE):
        return _TABLE[m]
    with _LOCK:
        # readers only ever see fully computed prefixes
        while len(_TABLE) <= m:
            k = len(_TABLE)
            s = sum(comb(k + 1, j) * _TABLE[j] for j in range(k))
            _TABLE.append(-s / (k + 1))
    return _TABLE[m]


def zeta_reg(d: int) -> Fraction:
    """Regularized value of sum_{k>=1} k^(d+1), namely zeta(-d-1) = -B_{d+2}/(d+2)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return -bernoulli(d + 2) / (d + 2)


RULES = ("zeta", "B_d", "-B_{d+2}")


def _rule_value(rule: str, m: int, strict: bool) -> Fraction:
    if rule == "zeta":
        if m == 0:
            if strict:
                raise ValueError("constant term has no regularized sum")
            return Fraction(0)
        return zeta_reg(m - 1)
    if rule == "B_d":
        return bernoulli(m)
    if rule == "-B_{d+2}":
        return -bernoulli(m + 2)
    raise ValueError(f"unknown substitution rule {rule!r}; expected one of {RULES}")


def substitute_powers(p: MultiPoly, var: str, rule: str, strict: bool = False) -> MultiPoly:
    """Replace var^m by the rule's value for m, leaving the other variables alone.

    ``zeta`` sends k^m to zeta(-m) for m >= 1 and the constant term to 0
    (or raises if ``strict``); ``B_d`` sends k^d to B_d; ``-B_{d+2}`` sends
    k^d to -B_{d+2}.
    """
    _rule_value(rule, 1, False)  # validates the name early
    if var not in p.vars:
        if p.is_zero():
            return p
        return p * _rule_value(rule, 0, strict)
    i = p.vars.index(var)
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in p.terms.items():
        val = _rule_value(rule, e[i], strict)
        if not val:
            continue
        e2 = e[:i] + (0,) + e[i + 1:]
        out[e2] = out.get(e2, 0) + c * val
    return MultiPoly(p.vars, out).drop_var(var)


def _univariate(p: MultiPoly, var: str) -> None:
    extra = [v for v in p.used_vars() if v != var]
    if extra:
        raise ValueError(f"expected a polynomial in {var} only, found {extra}")


def regularize_poly_sum(p: MultiPoly, var: str = "k", strict: bool = False) -> Fraction:
    """sum_{k>=1} p(k) under zeta regularization, as an exact rational."""
    _univariate(p, var)
    return substitute_powers(p, var, "zeta", strict).constant_term()


def substitute_bernoulli(p: MultiPoly, rule: str, var: str = "k") -> Fraction:
    """Apply k^d -> B_d (rule ``"B_d"``) or k^d -> -B_{d+2} (rule ``"-B_{d+2}"``)."""
    if rule not in ("B_d", "-B_{d+2}"):
        raise ValueError(f"unknown substitution rule {rule!r}")
    _univariate(p, var)
    return substitute_powers(p, var, rule).constant_term()
