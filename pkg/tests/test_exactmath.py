from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drcalc.exactmath import (
    InverseLinear,
    MultiPoly,
    Relation,
    bernoulli,
    bernoulli_gf,
    exp_of,
    expand_and_truncate,
    fit_univariate,
    fmt_rational,
    from_poly,
    interpolate_function,
    interpolate_simplex,
    laurent_invert_linear,
    parse_rational,
    poly_normalize,
    product_coefficient,
    regularize_poly_sum,
    substitute_bernoulli,
    substitute_powers,
    value_at_zero,
    zeta_reg,
)
from drcalc.exactmath.interp import simplex_points
from drcalc.exactmath.series import PoleFactor, _Packing, flat_product_coefficient, inverse_terms

from conftest import P


def _bernoulli_oracle(m: int) -> Fraction:
    # Akiyama-Tanigawa gives B_1 = +1/2; flip it to the B_1 = -1/2 convention
    a = [Fraction(1, j + 1) for j in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(m - i + 1):
            a[j] = (j + 1) * (a[j] - a[j + 1])
    return -a[0] if m == 1 else a[0]


# Bernoulli numbers and regularized sums ------------------------------------

@pytest.mark.parametrize("m,value", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (3, 0), (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))])
def test_bernoulli_anchors(m, value):
    assert bernoulli(m) == value


def test_bernoulli_matches_independent_recurrence():
    for m in range(40):
        assert bernoulli(m) == _bernoulli_oracle(m)


@pytest.mark.parametrize("d,value", [(0, Fraction(-1, 12)), (1, 0), (2, Fraction(1, 120)), (4, Fraction(-1, 252))])
def test_zeta_reg_anchors(d, value):
    assert zeta_reg(d) == value


def test_zeta_reg_agrees_with_bernoulli():
    for d in range(20):
        assert zeta_reg(d) == -bernoulli(d + 2) / (d + 2)


def test_regularized_sum_of_k():
    assert regularize_poly_sum(P("k")) == Fraction(-1, 12)
    assert regularize_poly_sum(P("k^3 + 2*k")) == Fraction(1, 120) - Fraction(1, 6)
    with pytest.raises(ValueError):
        regularize_poly_sum(P("1"), strict=True)
    with pytest.raises(ValueError):
        regularize_poly_sum(P("k*a"))


def test_substitute_bernoulli_rules():
    assert substitute_bernoulli(P("k^2"), "B_d") == Fraction(1, 6)
    assert substitute_bernoulli(P("1"), "B_d") == 1
    assert substitute_bernoulli(P("1"), "-B_{d+2}") == Fraction(-1, 6)
    assert substitute_bernoulli(P("k^2 + 3"), "-B_{d+2}") == Fraction(1, 30) - Fraction(1, 2)
    with pytest.raises(ValueError):
        substitute_bernoulli(P("k"), "zeta")


def test_substitute_powers_keeps_other_variables():
    out = substitute_powers(P("a*k^2 + b*k + 1"), "k", "B_d")
    assert out == P("a/6 - b/2 + 1")
    with pytest.raises(ValueError):
        substitute_powers(P("k"), "k", "nonsense")


# polynomials ---------------------------------------------------------------

def test_parse_and_print_round_trip():
    p = P("a1^2 - 2*b + 1/3")
    assert str(p) == "a1^2 - 2*b + 1/3"
    assert P(str(p)) == p
    assert MultiPoly.from_json(p.to_json()) == p


def test_rational_helpers():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert fmt_rational(Fraction(5, 1)) == "5"
    assert fmt_rational(Fraction(-2, 3)) == "-2/3"


def test_poly_normalize_eliminates_variable():
    rel = Relation(P("a1 + a2 - b"), "a1")
    assert poly_normalize(P("a1^2"), rel) == P("(b - a2)^2")
    assert poly_normalize(P("a2"), rel) == P("a2")
    assert poly_normalize(P("a1"), None) == P("a1")
    with pytest.raises(ValueError):
        Relation(P("a1^2 - b"), "a1")
    with pytest.raises(ValueError):
        Relation(P("a2 - b"), "a1")


def test_expand_and_truncate():
    assert expand_and_truncate(P("x^3"), "x", 2, 1) == P("8 + 12*t")
    assert expand_and_truncate(P("x^2*y"), "x", P("y"), 2) == P("y^3 + 2*y^2*t + y*t^2")
    with pytest.raises(ValueError):
        expand_and_truncate(P("x"), "x", P("x"), 1)


_small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw):
    names = ["x", "y"]
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        e = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        terms[e] = draw(_small)
    return MultiPoly(names, terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MultiPoly.zero()


@settings(max_examples=40, deadline=None)
@given(polys(), st.integers(-3, 3), st.integers(-3, 3))
def test_evaluate_is_a_ring_map(p, x, y):
    q = p * p + p
    at = {"x": x, "y": y}
    assert q.evaluate(at) == p.evaluate(at) ** 2 + p.evaluate(at)


# interpolation -------------------------------------------------------------

def test_fit_univariate():
    assert fit_univariate([0, 1, 2], [1, 2, 5]) == [1, 0, 1]
    assert value_at_zero([1, 2, 3], [3, 5, 7]) == 1


@settings(max_examples=30, deadline=None)
@given(polys())
def test_simplex_interpolation_round_trip(p):
    deg = max(p.degree(), 0)
    vals = {c: p.evaluate({"x": c[0] - 2, "y": c[1] + 1}) for c in simplex_points(2, deg)}
    assert interpolate_simplex(vals, ["x", "y"], deg, shift=(-2, 1)) == p


def test_interpolate_function_matches_binomial():
    p = interpolate_function(lambda c: comb(c[0], 2), ["n"], 2)
    assert p == P("n*(n-1)/2")
    with pytest.raises(ValueError):
        interpolate_simplex({(0,): 1}, ["n"], 1)


# truncated series ----------------------------------------------------------

def test_bernoulli_generating_function():
    u = from_poly(MultiPoly.var("u"), ["u"], cap=8)
    B = bernoulli_gf(u)
    assert B.coefficient_at([1]) == MultiPoly.const(Fraction(-1, 2))
    assert B.coefficient_at([2]) == MultiPoly.const(Fraction(1, 12))
    for d in range(9):
        assert B.coefficient_at([d]).constant_term() == bernoulli(d) / _fact(d)


def test_exp_series():
    u = from_poly(MultiPoly.var("u"), ["u"], cap=6)
    E = exp_of(u)
    for d in range(7):
        assert E.coefficient_at([d]).constant_term() == Fraction(1, _fact(d))


def _fact(d: int) -> int:
    out = 1
    for j in range(2, d + 1):
        out *= j
    return out


def test_laurent_inverse_of_linear_form():
    L = laurent_invert_linear(P("z1 + z2"), ["z1", "z2"], floor=[-4, 0], ceil=[-1, 3])
    for k in range(4):
        assert L.coefficient_at([-1 - k, k]).constant_term() == (-1) ** k
    assert L.coefficient_at([-2, 0]).is_zero()
    single = laurent_invert_linear(P("z1"), ["z1"], floor=[-3], ceil=[3])
    assert single.coefficient_at([-1]).constant_term() == 1


def _two_pole_coeff(c1: int, c2: int, k: int) -> Fraction:
    # z0^{-2-k} z1^k in 1/(z0 + c1 z1) * 1/(z0 + c2 z1)
    return sum(Fraction((-c1) ** a * (-c2) ** (k - a)) for a in range(k + 1))


@pytest.mark.parametrize("c1,c2,k", [(-1, 2, 2), (1, 1, 3), (3, -2, 4), (1, 0, 2)])
def test_flat_and_series_products_agree(c1, c2, k):
    coeffs = [{0: 1, 1: c1}, {0: 1, 1: c2}]
    fs = [InverseLinear({i: c for i, c in d.items() if c}) for d in coeffs]
    want = _two_pole_coeff(c1, c2, k)
    assert product_coefficient(fs, ["z0", "z1"], [-2 - k, k]) == MultiPoly.const(want)
    flat = flat_product_coefficient(fs, 2, 0, [-2 - k, k])
    assert flat.get((), 0) == want


def test_inverse_terms_fast_and_fallback_paths():
    unit, d = inverse_terms({0: Fraction(1), 1: Fraction(3)}, 2, (-4, 0), (-1, 3))
    assert d == 1
    assert unit == {(-1, 0): 1, (-2, 1): -3, (-3, 2): 9, (-4, 3): -27}
    other, d = inverse_terms({0: Fraction(2), 1: Fraction(3)}, 2, (-4, 0), (-1, 3))
    for j in range(4):
        assert Fraction(other[(-1 - j, j)], d) == Fraction((-3) ** j, 2 ** (j + 1))


def test_pole_factor_requires_shift_in_form():
    with pytest.raises(ValueError):
        PoleFactor({0: 1, 1: 1}, 2, lambda fl, cl: {})
    pf = PoleFactor({1: 1, 2: -1}, 2, lambda fl, cl: {})
    assert pf.lead == 1 and pf.support == frozenset({1, 2})


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, (1 << 15) - 1), min_size=1, max_size=5))
def test_packing_round_trip(vals):
    pk = _Packing(len(vals))
    assert pk.unpack(pk.pack(vals)) == tuple(vals)


def test_packing_rejects_overflow():
    pk = _Packing(2)
    with pytest.raises(OverflowError):
        pk.pack([0, 1 << 15])
    with pytest.raises(OverflowError):
        pk.pack([-1, 0])
