"""Truncated multivariate (iterated) Laurent series.

A series has *series variables*, listed in the iterated-Laurent order
(first = most significant), and *coefficient variables* that only enter
polynomially.  Terms are grouped by the series exponent vector; each
group is a sparse polynomial in the coefficient variables.  Every term
kept respects the window: per-variable [floor, ceil] and an optional cap
on the total series degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from itertools import product
from operator import add, mul
from typing import Callable, Mapping, Sequence

from .bernoulli import bernoulli
from .poly import MultiPoly, Scalar, sort_vars

Bound = "int | None"


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    get = out.get
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(map(add, e1, e2))
            out[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _padd_into(acc: dict, b: dict, scale: Scalar = 1) -> None:
    for e, c in b.items():
        s = acc.get(e, 0) + c * scale
        if s:
            acc[e] = s
        else:
            acc.pop(e, None)


def _tighter(a, b, pick):
    if a is None:
        return b
    if b is None:
        return a
    return pick(a, b)


class TruncSeries:
    __slots__ = ("svars", "cvars", "terms", "cap", "floor", "ceil")

    def __init__(
        self,
        svars: Sequence[str],
        cvars: Sequence[str] = (),
        terms: Mapping[tuple[int, ...], Mapping[tuple[int, ...], Scalar]] | None = None,
        cap: int | None = None,
        floor: Sequence[int | None] | None = None,
        ceil: Sequence[int | None] | None = None,
    ):
        self.svars = tuple(svars)
        self.cvars = tuple(cvars)
        if tuple(sort_vars(self.cvars)) != self.cvars:
            raise ValueError("coefficient variables must be in sorted order")
        n = len(self.svars)
        self.cap = cap
        self.floor = tuple(floor) if floor is not None else (None,) * n
        self.ceil = tuple(ceil) if ceil is not None else (None,) * n
        if len(self.floor) != n or len(self.ceil) != n:
            raise ValueError("window length does not match the series variables")
        self.terms: dict = {}
        for s, coef in (terms or {}).items():
            coef = {e: c for e, c in coef.items() if c}
            if coef and self.admits(s):
                self.terms[tuple(s)] = coef

    # window -------------------------------------------------------------
    def admits(self, s: Sequence[int]) -> bool:
        if self.cap is not None and sum(s) > self.cap:
            return False
        for k, lo, hi in zip(s, self.floor, self.ceil):
            if (lo is not None and k < lo) or (hi is not None and k > hi):
                return False
        return True

    def _window_like(self, other: "TruncSeries"):
        cap = _tighter(self.cap, other.cap, min)
        floor = tuple(_tighter(a, b, max) for a, b in zip(self.floor, other.floor))
        ceil = tuple(_tighter(a, b, min) for a, b in zip(self.ceil, other.ceil))
        return cap, floor, ceil

    def with_window(self, cap=None, floor=None, ceil=None) -> "TruncSeries":
        return TruncSeries(self.svars, self.cvars, self.terms, cap, floor, ceil)

    # coefficient alignment ---------------------------------------------
    def _recoef(self, cvars: tuple[str, ...]) -> dict:
        if cvars == self.cvars:
            return self.terms
        pos = [cvars.index(v) for v in self.cvars]
        n = len(cvars)
        out = {}
        for s, coef in self.terms.items():
            d = {}
            for e, c in coef.items():
                f = [0] * n
                for i, k in zip(pos, e):
                    f[i] = k
                d[tuple(f)] = c
            out[s] = d
        return out

    def _check_same(self, other: "TruncSeries"):
        if self.svars != other.svars:
            raise ValueError("series variable orders differ")
        cv = sort_vars(self.cvars + other.cvars)
        return cv, self._recoef(cv), other._recoef(cv)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        cv, a, b = self._check_same(other)
        out = {s: dict(c) for s, c in a.items()}
        for s, coef in b.items():
            acc = out.setdefault(s, {})
            _padd_into(acc, coef)
            if not acc:
                del out[s]
        cap, floor, ceil = self._window_like(other)
        return TruncSeries(self.svars, cv, out, cap, floor, ceil)

    def __neg__(self) -> "TruncSeries":
        return self.scale(-1)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, c: Scalar | MultiPoly) -> "TruncSeries":
        if isinstance(c, MultiPoly):
            cv = sort_vars(self.cvars + c.vars)
            ct = c.with_vars(cv)
            terms = {s: _pmul(coef, ct) for s, coef in self._recoef(cv).items()}
            return TruncSeries(self.svars, cv, terms, self.cap, self.floor, self.ceil)
        terms = {s: {e: x * c for e, x in coef.items()} for s, coef in self.terms.items()}
        return TruncSeries(self.svars, self.cvars, terms, self.cap, self.floor, self.ceil)

    def mul(self, other: "TruncSeries", cap=None, floor=None, ceil=None) -> "TruncSeries":
        """Product re-truncated to the given window (default: the tighter of both)."""
        cv, a, b = self._check_same(other)
        dcap, dfloor, dceil = self._window_like(other)
        cap = dcap if cap is None else cap
        floor = dfloor if floor is None else tuple(floor)
        ceil = dceil if ceil is None else tuple(ceil)
        probe = TruncSeries(self.svars, cv, None, cap, floor, ceil)
        admits = probe.admits
        out: dict = {}
        for s1, c1 in a.items():
            for s2, c2 in b.items():
                s = tuple(map(add, s1, s2))
                if not admits(s):
                    continue
                prod = _pmul(c1, c2)
                if not prod:
                    continue
                acc = out.get(s)
                if acc is None:
                    out[s] = prod
                else:
                    _padd_into(acc, prod)
        probe.terms = {s: c for s, c in out.items() if c}
        return probe

    __mul__ = mul

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient_at(self, exps: Sequence[int] | Mapping[str, int]) -> MultiPoly:
        if isinstance(exps, Mapping):
            unknown = set(exps) - set(self.svars)
            if unknown:
                raise ValueError(f"unknown series variables {sorted(unknown)}")
            exps = tuple(exps.get(v, 0) for v in self.svars)
        exps = tuple(exps)
        if len(exps) != len(self.svars):
            raise ValueError("exponent vector has the wrong length")
        return MultiPoly._raw(self.cvars, dict(self.terms.get(exps, {})))

    def derivative(self, var: str) -> "TruncSeries":
        if var in self.cvars:
            i = self.cvars.index(var)
            out = {}
            for s, coef in self.terms.items():
                d = {}
                for e, c in coef.items():
                    if e[i]:
                        d[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
                if d:
                    out[s] = d
            return TruncSeries(self.svars, self.cvars, out, self.cap, self.floor, self.ceil)
        if var not in self.svars:
            return TruncSeries(self.svars, self.cvars, None, self.cap, self.floor, self.ceil)
        i = self.svars.index(var)
        out = {}
        for s, coef in self.terms.items():
            k = s[i]
            if k:
                out[s[:i] + (k - 1,) + s[i + 1:]] = {e: c * k for e, c in coef.items()}
        shift = lambda b: None if b is None else b - 1
        ceil = self.ceil[:i] + (shift(self.ceil[i]),) + self.ceil[i + 1:]
        floor = self.floor[:i] + (shift(self.floor[i]),) + self.floor[i + 1:]
        return TruncSeries(self.svars, self.cvars, out, shift(self.cap), floor, ceil)

    def degree_part(self, d: int) -> "TruncSeries":
        """Terms whose total series degree equals d."""
        terms = {s: c for s, c in self.terms.items() if sum(s) == d}
        return TruncSeries(self.svars, self.cvars, terms, self.cap, self.floor, self.ceil)

    def to_poly(self) -> MultiPoly:
        allv = self.svars + self.cvars
        items = []
        for s, coef in self.terms.items():
            for e, c in coef.items():
                mono = {v: k for v, k in zip(allv, s + e) if k}
                items.append((mono, c))
        return MultiPoly.from_monomials(items)

    def __repr__(self) -> str:
        return f"TruncSeries({self.to_poly()}; order={self.svars})"


# constructors -----------------------------------------------------------

def from_poly(p: MultiPoly, svars: Sequence[str], cap=None, floor=None, ceil=None) -> TruncSeries:
    svars = tuple(svars)
    cvars = tuple(v for v in p.vars if v not in svars)
    spos = [p.vars.index(v) if v in p.vars else None for v in svars]
    cpos = [p.vars.index(v) for v in cvars]
    terms: dict = {}
    for e, c in p.terms.items():
        s = tuple(e[i] if i is not None else 0 for i in spos)
        ce = tuple(e[i] for i in cpos)
        terms.setdefault(s, {})[ce] = c
    return TruncSeries(svars, cvars, terms, cap, floor, ceil)


def one_like(s: TruncSeries) -> TruncSeries:
    return TruncSeries(s.svars, s.cvars, {(0,) * len(s.svars): {(0,) * len(s.cvars): 1}}, s.cap, s.floor, s.ceil)


def _bounded(s: TruncSeries) -> bool:
    """True when positive powers of ``s`` eventually leave the window."""
    if s.cap is not None:
        return True
    for sexp in s.terms:
        if not any(k > 0 and s.ceil[i] is not None for i, k in enumerate(sexp)):
            return False
    return True


def compose_univariate(coeff: Callable[[int], Fraction], s: TruncSeries) -> TruncSeries:
    """sum_j coeff(j) s^j for a series s with no constant term, within s's window."""
    zero = (0,) * len(s.svars)
    for sexp in s.terms:
        if any(k < 0 for k in sexp) or sexp == zero:
            raise ValueError("argument must be a power series with zero constant term")
    if not _bounded(s):
        raise ValueError("window does not bound the powers of the argument")
    acc = one_like(s).scale(coeff(0))
    power = one_like(s)
    j = 0
    while True:
        j += 1
        power = power * s
        if power.is_zero():
            break
        c = coeff(j)
        if c:
            acc = acc + power.scale(c)
    return acc


def exp_of(s: TruncSeries) -> TruncSeries:
    return compose_univariate(lambda j: Fraction(1, factorial(j)), s)


def bernoulli_gf(u: TruncSeries) -> TruncSeries:
    """u/(e^u - 1) evaluated at the series u."""
    return compose_univariate(lambda j: bernoulli(j) / factorial(j), u)


def linear_series(form: MultiPoly, svars: Sequence[str], cap=None, floor=None, ceil=None) -> TruncSeries:
    return from_poly(form, svars, cap, floor, ceil)


def _lex_leading(s: TruncSeries) -> tuple[int, ...]:
    return min(s.terms)


def inverse_of(s: TruncSeries) -> TruncSeries:
    """1/s when s = c*m*(1 + R) with m the order-leading monomial, c rational, R a power series."""
    if s.is_zero():
        raise ValueError("cannot invert the zero series")
    lead = _lex_leading(s)
    coef = s.terms[lead]
    unit = (0,) * len(s.cvars)
    if set(coef) != {unit}:
        raise ValueError("leading coefficient is not a rational unit")
    c = Fraction(coef[unit])
    rest_terms = {}
    for sexp, cf in s.terms.items():
        if sexp == lead:
            continue
        d = tuple(a - b for a, b in zip(sexp, lead))
        if any(k < 0 for k in d):
            raise ValueError("series has no leading unit under the declared order")
        rest_terms[d] = {e: x / c for e, x in cf.items()}
    # geometric series in R, with the window moved by the leading exponent
    neg = tuple(-k for k in lead)
    cap = None if s.cap is None else s.cap - sum(neg)
    ceil = tuple(None if hi is None else hi - k for hi, k in zip(s.ceil, neg))
    r = TruncSeries(s.svars, s.cvars, rest_terms, cap, None, ceil)
    inv = compose_univariate(lambda j: Fraction((-1) ** j), r) if r.terms else one_like(r)
    out = {tuple(a + b for a, b in zip(sexp, neg)): {e: x / c for e, x in cf.items()} for sexp, cf in inv.terms.items()}
    return TruncSeries(s.svars, s.cvars, out, s.cap, s.floor, s.ceil)


def _linear_coeffs(form: MultiPoly, svars: Sequence[str]) -> dict[int, Fraction]:
    out = {}
    for mono, c in form.items():
        if len(mono) != 1 or list(mono.values()) != [1] or next(iter(mono)) not in svars:
            raise ValueError("expected a linear form in the series variables")
        out[svars.index(next(iter(mono)))] = c
    if not out:
        raise ValueError("cannot invert the zero form")
    return out


def invert_linear_terms(coeffs: Mapping[int, Fraction], n: int, floor, ceil) -> dict | None:
    """Terms of 1/sum(coeffs[i] z_i) in the window, or None if the window is empty."""
    m = min(coeffs)
    c = Fraction(coeffs[m])
    rest = {i: -Fraction(a) / c for i, a in coeffs.items() if i != m}
    lo_m = floor[m] if floor is not None else None
    # lead exponents run down from -1, so only a floor above -1 empties the window
    if lo_m is not None and lo_m > -1:
        return None
    bounds = []
    if lo_m is not None:
        bounds.append(-1 - lo_m)
    if ceil is not None and all(ceil[i] is not None for i in rest):
        bounds.append(sum(max(ceil[i], 0) for i in rest))
    if not rest:
        bounds.append(0)
    if not bounds:
        raise ValueError("window does not bound the Laurent expansion")
    jmax = min(bounds)
    out: dict = {}
    base = [0] * n
    base[m] = -1
    power: dict[tuple[int, ...], Fraction] = {tuple(base): 1 / c}
    for j in range(jmax + 1):
        for s, x in power.items():
            out[s] = {(): x}
        if j == jmax:
            break
        nxt: dict = {}
        for s, x in power.items():
            for i, r in rest.items():
                t = list(s)
                t[i] += 1
                t[m] -= 1
                if ceil is not None and ceil[i] is not None and t[i] > ceil[i]:
                    continue
                t = tuple(t)
                nxt[t] = nxt.get(t, 0) + x * r
        power = {s: x for s, x in nxt.items() if x}
        if not power:
            break
    return out


def laurent_invert_linear(
    f: MultiPoly,
    svars: Sequence[str],
    floor: Sequence[int | None] | None = None,
    ceil: Sequence[int | None] | None = None,
) -> TruncSeries:
    """1/f expanded in the order-leading variable of f, truncated to the window.

    Raises ValueError when the window cannot hold the leading term or does
    not bound the expansion.
    """
    svars = tuple(svars)
    n = len(svars)
    coeffs = _linear_coeffs(f, svars)
    terms = invert_linear_terms(coeffs, n, floor, ceil)
    if terms is None:
        raise ValueError("window too small to represent any term")
    return TruncSeries(svars, (), terms, None, floor, ceil)


# Laurent coefficient extraction for products ---------------------------

@dataclass
class PowerFactor:
    """A power series factor, built on demand for a given per-variable window.

    ``lows[i]`` is a lower bound on the exponent of variable i in any term;
    ``support`` lists the variables that can occur.
    """

    build: Callable[[tuple, tuple], TruncSeries]
    lows: tuple[int, ...]
    support: frozenset[int]


@dataclass
class InverseLinear:
    """The factor 1/L for a linear form L given as {variable index: coefficient}."""

    coeffs: dict[int, Fraction]
    support: frozenset[int] = field(init=False)

    def __post_init__(self):
        self.support = frozenset(self.coeffs)

    @property
    def lead(self) -> int:
        return min(self.coeffs)


@dataclass
class PoleFactor:
    """z_shift / L plus a part regular in every variable, with z_shift dividing it.

    ``build(floor, ceil)`` returns the terms in the window; the lower
    bounds used for windowing are those of z_shift / L.
    """

    coeffs: dict[int, Fraction]
    shift: int
    build: Callable[[tuple, tuple], object]
    support: frozenset[int] = field(init=False)

    def __post_init__(self):
        if self.shift not in self.coeffs:
            raise ValueError("the shifted variable must occur in the linear form")
        self.support = frozenset(self.coeffs)

    @property
    def lead(self) -> int:
        return min(self.coeffs)


def _windows(factors: Sequence, n: int, target: Sequence[int]):
    """Per-factor (lows, ceils, floors) of the exponents that can reach ``target``.

    Exponent ceilings are derived variable by variable from the last one
    in the order to the first.  A factor's exponent of variable p is at
    most target_p minus the lower bounds of the other factors; for 1/L
    the lower bound on its leading variable follows from the ceilings
    already fixed for the later variables of L.  Returns None when no
    term can reach the target.
    """
    k = len(factors)
    lows = [[0] * n for _ in range(k)]
    ceils: list[list[int]] = [[0] * n for _ in range(k)]
    for p in reversed(range(n)):
        for f, F in enumerate(factors):
            if p not in F.support:
                lows[f][p] = 0
            elif isinstance(F, InverseLinear):
                if p == F.lead:
                    lows[f][p] = -1 - sum(ceils[f][q] for q in F.support if q != p)
                else:
                    lows[f][p] = 0
            elif isinstance(F, PoleFactor):
                e = F.shift
                lows[f][p] = int(p == e)
                if p == F.lead:
                    lows[f][p] -= 1 + sum(ceils[f][q] - (q == e) for q in F.support if q != p)
            else:
                lows[f][p] = F.lows[p]
        total = sum(lows[f][p] for f in range(k))
        for f, F in enumerate(factors):
            if p not in F.support:
                ceils[f][p] = 0
                continue
            ceils[f][p] = target[p] - (total - lows[f][p])
            if ceils[f][p] < lows[f][p]:
                return None
    floors = []
    for f in range(k):
        floors.append([target[p] - sum(ceils[g][p] for g in range(k) if g != f) for p in range(n)])
    return lows, ceils, floors


def _partial_window(lows, ceils, target, start: int, n: int):
    """Window for a partial product when factors start.. are still to come."""
    k = len(lows)
    rem = range(start, k)
    ceil = tuple(target[p] - sum(lows[g][p] for g in rem) for p in range(n))
    floor = tuple(target[p] - sum(ceils[g][p] for g in rem) for p in range(n))
    return floor, ceil


def product_coefficient(factors: Sequence, svars: Sequence[str], target: Sequence[int], cvars: Sequence[str] = ()) -> MultiPoly:
    """Coefficient of z^target in the product of the factors, exactly (no escalation)."""
    svars = tuple(svars)
    n = len(svars)
    k = len(factors)
    win = _windows(factors, n, target)
    if win is None:
        return MultiPoly.zero()
    lows, ceils, floors = win
    built = []
    for f, F in enumerate(factors):
        if isinstance(F, InverseLinear):
            terms = invert_linear_terms(F.coeffs, n, floors[f], ceils[f])
            if terms is None:
                return MultiPoly.zero()
            s = TruncSeries(svars, (), terms)
        else:
            s = F.build(tuple(floors[f]), tuple(ceils[f]))
        built.append(s)
    acc = None
    for f, s in enumerate(built):
        if acc is None:
            acc = s
        else:
            floor, ceil = _partial_window(lows, ceils, target, f + 1, n)
            acc = acc.mul(s, cap=None, floor=floor, ceil=ceil)
        if acc.is_zero():
            return MultiPoly.zero()
    coef = acc.coefficient_at(tuple(target))
    if cvars:
        cv = sort_vars(tuple(cvars) + coef.vars)
        return MultiPoly._raw(cv, coef.with_vars(cv))
    return coef


# flat engine: rational coefficients, extra exponent slots -----------------

@dataclass
class FlatFactor:
    """A power series with rational coefficients over n window variables plus extra slots.

    ``build(floor, ceil)`` returns {exponent tuple: Fraction} or a pair
    (integer terms, common denominator); the first n entries of each
    exponent tuple are the windowed variables.
    """

    build: Callable[[tuple, tuple], dict]
    lows: tuple[int, ...]
    support: frozenset[int]


_W = 16
_TOP = 1 << (_W - 1)


class _Packing:
    """Exponent vectors packed into one int, one guarded field per coordinate.

    Stored fields are non-negative offsets from a per-factor base, so a
    product adds packed ints and the window test is two borrow checks.
    """

    def __init__(self, width: int):
        self.width = width
        self.shifts = tuple(_W * i for i in range(width))
        self.guard = sum(_TOP << sh for sh in self.shifts)

    def pack(self, vals) -> int:
        if any(not 0 <= v < _TOP for v in vals):
            raise OverflowError("exponent field overflow")
        return sum(v << sh for v, sh in zip(vals, self.shifts))

    def pack_terms(self, terms: dict, base: Sequence[int]) -> dict:
        """Pack {exponent tuple: c} relative to ``base``; every exponent must lie in [base, base + _TOP)."""
        weights = [1 << k for k in self.shifts]
        shift = sum(map(mul, base, weights))
        return {sum(map(mul, e, weights)) - shift: c for e, c in terms.items()}

    def unpack(self, x: int) -> tuple[int, ...]:
        mask = (1 << _W) - 1
        return tuple((x >> sh) & mask for sh in self.shifts)


def _packed_multiply(a: dict, b: dict, lo: int, hi: int, guard: int) -> dict:
    out: dict = {}
    get = out.get
    items = list(b.items())
    hg = hi | guard
    for e1, c1 in a.items():
        for e2, c2 in items:
            e = e1 + e2
            if ((e | guard) - lo) & guard == guard and (hg - e) & guard == guard:
                out[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def flat_product_coefficient(factors: Sequence, n: int, m: int, target: Sequence[int]) -> dict:
    """{extra exponents: coefficient} of z^target in the product, for n window and m extra slots."""
    win = _windows(factors, n, target)
    if win is None:
        return {}
    lows, ceils, floors = win
    if any(ceils[f][i] - floors[f][i] >= _TOP for f in range(len(factors)) for i in range(n)):
        raise OverflowError("exponent window too wide to pack")
    pk = _Packing(n + m)
    guard = pk.guard
    free = (_TOP - 1,) * m
    pad = (0,) * m
    off = [0] * n
    acc = None
    denom = 1
    # windows of the partial products, from suffix sums over the factors still to come
    k = len(factors)
    low_after = [[0] * n for _ in range(k + 1)]
    ceil_after = [[0] * n for _ in range(k + 1)]
    for f in reversed(range(k)):
        low_after[f] = [low_after[f + 1][i] + lows[f][i] for i in range(n)]
        ceil_after[f] = [ceil_after[f + 1][i] + ceils[f][i] for i in range(n)]
    for f, F in enumerate(factors):
        fl, cl = tuple(floors[f]), tuple(ceils[f])
        if isinstance(F, InverseLinear):
            terms, d = inverse_terms(F.coeffs, n, fl, cl)
            terms = {e + pad: x for e, x in terms.items()}
        else:
            s = F.build(fl, cl)
            terms, d = s if isinstance(s, tuple) else _integral(s)
        if not terms:
            return {}
        denom *= d
        terms = pk.pack_terms(terms, fl + pad)
        off = [off[i] + fl[i] for i in range(n)]
        ceil = [target[i] - low_after[f + 1][i] for i in range(n)]
        floor = [target[i] - ceil_after[f + 1][i] for i in range(n)]
        if any(ceil[i] < off[i] for i in range(n)):
            return {}
        lo = pk.pack([max(floor[i] - off[i], 0) for i in range(n)] + [0] * m)
        hi = pk.pack([ceil[i] - off[i] for i in range(n)] + list(free))
        if acc is None:
            hg = hi | guard
            acc = {e: c for e, c in terms.items() if ((e | guard) - lo) & guard == guard and (hg - e) & guard == guard}
        else:
            acc = _packed_multiply(acc, terms, lo, hi, guard)
        if not acc:
            return {}
    return {pk.unpack(e)[n:]: Fraction(c, denom) for e, c in acc.items()}


def inverse_terms(coeffs: Mapping[int, Fraction], n: int, floor, ceil) -> tuple[dict, int]:
    """Terms of 1/L inside the window as (integer coefficients, denominator)."""
    fast = _flat_inverse(coeffs, n, floor, ceil)
    if fast is not None:
        return fast
    terms = invert_linear_terms(coeffs, n, floor, ceil)
    if terms is None:
        return {}, 1
    return _integral({e: x[()] for e, x in terms.items() if all(floor[i] <= e[i] <= ceil[i] for i in range(n))})


def _flat_inverse(coeffs: Mapping[int, Fraction], n: int, floor, ceil) -> tuple[dict, int] | None:
    """Integer terms of 1/L in the window when L has integer coefficients and a unit lead.

    Returns None when that fast path does not apply.
    """
    if any(Fraction(a).denominator != 1 for a in coeffs.values() if not isinstance(a, int)):
        return None
    ints = {i: int(a) for i, a in coeffs.items()}
    lead = min(ints)
    c = ints[lead]
    if c not in (1, -1):
        return None
    rest = sorted(i for i in ints if i != lead)
    if any(floor[i] > 0 for i in range(n) if i not in ints):
        return {}, 1
    ratio = {i: -ints[i] * c for i in rest}
    out = {}
    for ks in product(*(range(max(floor[i], 0), ceil[i] + 1) for i in rest)):
        j = sum(ks)
        if not floor[lead] <= -1 - j <= ceil[lead]:
            continue
        x = factorial(j)
        for i, k in zip(rest, ks):
            x = x // factorial(k) * ratio[i] ** k
        e = [0] * n
        e[lead] = -1 - j
        for i, k in zip(rest, ks):
            e[i] = k
        out[tuple(e)] = c * x
    return out, 1


def _integral(s: dict) -> tuple[dict, int]:
    """Integer coefficients over a common denominator; int products beat Fraction ones."""
    d = lcm(*(c.denominator for c in s.values())) if s else 1
    return {e: c.numerator * (d // c.denominator) for e, c in s.items()}, d


def derivative(s: TruncSeries, var: str) -> TruncSeries:
    return s.derivative(var)


def multiply(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a.mul(b)
