"""Sparse multivariate polynomials with exact rational coefficients.

Exponents are stored as tuples aligned with a sorted tuple of variable
names.  Coefficients are ``int`` or ``Fraction``; ints are kept where
possible because they are much cheaper than reduced fractions.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from operator import add
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

_NAME = re.compile(r"([A-Za-z_]+)(\d*)(.*)")


def var_key(name: str) -> tuple:
    m = _NAME.fullmatch(name)
    if not m:
        return (name, -1, "")
    stem, num, rest = m.groups()
    return (stem, int(num) if num else -1, rest)


def sort_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


def fmt_rational(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(s: str | int | Fraction) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(s.strip())


def _clean(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c}


class MultiPoly:
    """Immutable sparse polynomial over named variables."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str] = (), terms: Mapping[tuple[int, ...], Scalar] | None = None):
        vs = tuple(vars)
        sv = sort_vars(vs)
        if terms is None:
            terms = {}
        if sv != vs:
            if len(set(vs)) != len(vs):
                raise ValueError("duplicate variable names")
            perm = [vs.index(v) for v in sv]
            terms = {tuple(e[i] for i in perm): c for e, c in terms.items()}
        self.vars: tuple[str, ...] = sv
        self.terms: dict[tuple[int, ...], Scalar] = _clean(terms)
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar, vars: Iterable[str] = ()) -> "MultiPoly":
        vs = sort_vars(vars)
        return cls._raw(vs, {(0,) * len(vs): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls._raw((name,), {(1,): 1})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw((), {})

    @classmethod
    def one(cls) -> "MultiPoly":
        return cls._raw((), {(): 1})

    @classmethod
    def from_monomials(cls, items: Iterable[tuple[Mapping[str, int], Scalar]]) -> "MultiPoly":
        items = list(items)
        vs = sort_vars(v for m, _ in items for v in m)
        idx = {v: i for i, v in enumerate(vs)}
        out: dict = {}
        for mono, c in items:
            e = [0] * len(vs)
            for v, k in mono.items():
                e[idx[v]] += k
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return cls._raw(vs, _clean(out))

    @classmethod
    def linear(cls, coeffs: Mapping[str, Scalar], const: Scalar = 0) -> "MultiPoly":
        items = [({v: 1}, c) for v, c in coeffs.items()]
        if const:
            items.append(({}, const))
        return cls.from_monomials(items)

    @classmethod
    def coerce(cls, x: "MultiPoly | Scalar | str") -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiPoly")

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        """Parse an expression such as ``"a1^2 - 2*b + 1/3"``."""
        try:
            tree = ast.parse(text.replace("^", "**").replace("−", "-"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"malformed polynomial {text!r}") from exc
        return _eval_ast(tree.body, text)

    # alignment ----------------------------------------------------------
    def with_vars(self, vars: tuple[str, ...]) -> dict:
        """Terms re-indexed against the sorted superset ``vars``."""
        if vars == self.vars:
            return self.terms
        n = len(vars)
        pos = [vars.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            f = [0] * n
            for i, k in zip(pos, e):
                f[i] = k
            out[tuple(f)] = c
        return out

    def _align(self, other: "MultiPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vs = sort_vars(self.vars + other.vars)
        return vs, self.with_vars(vs), other.with_vars(vs)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                other = MultiPoly.const(other)
            else:
                return NotImplemented
        vs, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                other = MultiPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        vs, a, b = self._align(other)
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return MultiPoly._raw(vs, _clean(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparison ---------------------------------------------------------
    def _canon(self) -> frozenset:
        used = self.used_vars()
        pos = [self.vars.index(v) for v in used]
        return frozenset((tuple(zip(used, (e[i] for i in pos))), Fraction(c)) for e, c in self.terms.items())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        return (self - other).is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canon())
        return self._hash

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def used_vars(self) -> tuple[str, ...]:
        n = len(self.vars)
        used = [False] * n
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def trim(self) -> "MultiPoly":
        used = self.used_vars()
        if used == self.vars:
            return self
        pos = [self.vars.index(v) for v in used]
        return MultiPoly._raw(used, {tuple(e[i] for i in pos): c for e, c in self.terms.items()})

    def drop_var(self, var: str) -> "MultiPoly":
        """Remove ``var`` from the alphabet; it must not occur."""
        if var not in self.vars:
            return self
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                raise ValueError(f"{var} still occurs")
            out[e[:i] + e[i + 1:]] = c
        return MultiPoly._raw(self.vars[:i] + self.vars[i + 1:], out)

    def degree(self, var: str | None = None) -> int:
        """Total degree (or degree in ``var``); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def min_degree(self) -> int:
        return min(sum(e) for e in self.terms) if self.terms else -1

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return Fraction(self.terms.get((0,) * len(self.vars), 0))

    def coefficient(self, mono: Mapping[str, int]) -> Fraction:
        for v, k in mono.items():
            if k and v not in self.vars:
                return Fraction(0)
        e = tuple(mono.get(v, 0) for v in self.vars)
        return Fraction(self.terms.get(e, 0))

    def coeff_of(self, var: str, k: int) -> "MultiPoly":
        """Coefficient of var^k, as a polynomial in the other variables."""
        if var not in self.vars:
            return self.drop_var(var) if k == 0 else MultiPoly._raw(self.vars, {})
        i = self.vars.index(var)
        out = {e[:i] + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k}
        return MultiPoly._raw(self.vars[:i] + self.vars[i + 1:], out)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def items(self):
        """Iterate (monomial dict, Fraction) pairs in a deterministic order."""
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            yield {v: k for v, k in zip(self.vars, e) if k}, Fraction(self.terms[e])

    def map_coeffs(self, f) -> "MultiPoly":
        return MultiPoly._raw(self.vars, _clean({e: f(c) for e, c in self.terms.items()}))

    # substitution -------------------------------------------------------
    def subs(self, values: Mapping[str, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials or scalars."""
        hit = [v for v in self.vars if v in values]
        if not hit:
            return self
        keep = [v for v in self.vars if v not in values]
        keep_pos = [self.vars.index(v) for v in keep]
        hit_pos = [self.vars.index(v) for v in hit]
        vals = [MultiPoly.coerce(values[v]) for v in hit]
        vs = sort_vars(keep + [w for p in vals for w in p.vars])
        vals_t = [p.with_vars(vs) for p in vals]
        keep_idx = [vs.index(v) for v in keep]
        n = len(vs)
        powers: list[dict[int, dict]] = [{0: {(0,) * n: 1}} for _ in hit]

        def power(j: int, k: int) -> dict:
            cache = powers[j]
            if k not in cache:
                prev = power(j, k - 1)
                out: dict = {}
                for e1, c1 in prev.items():
                    for e2, c2 in vals_t[j].items():
                        e = tuple(map(add, e1, e2))
                        out[e] = out.get(e, 0) + c1 * c2
                cache[k] = _clean(out)
            return cache[k]

        # group by the substituted exponents so each product is formed once
        groups: dict[tuple, list] = {}
        for e, c in self.terms.items():
            groups.setdefault(tuple(e[i] for i in hit_pos), []).append((e, c))
        out: dict = {}
        for hk, members in groups.items():
            prod = {(0,) * n: 1}
            for j, k in enumerate(hk):
                if k:
                    pk = power(j, k)
                    nxt: dict = {}
                    for e1, c1 in prod.items():
                        for e2, c2 in pk.items():
                            e = tuple(map(add, e1, e2))
                            nxt[e] = nxt.get(e, 0) + c1 * c2
                    prod = nxt
            for e, c in members:
                base = [0] * n
                for i, p in zip(keep_idx, keep_pos):
                    base[i] = e[p]
                for e2, c2 in prod.items():
                    f = tuple(map(add, base, e2))
                    out[f] = out.get(f, 0) + c * c2
        return MultiPoly._raw(vs, _clean(out))

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.used_vars() if v not in values]
        if missing:
            raise ValueError(f"no value for {missing}")
        r = self.subs({v: values[v] for v in self.vars if v in values})
        return r.constant_term()

    def diff(self, var: str) -> "MultiPoly":
        if var not in self.vars:
            return MultiPoly._raw(self.vars, {})
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return MultiPoly._raw(self.vars, out)

    def euler(self) -> "MultiPoly":
        """Apply the degree operator: each monomial times its total degree."""
        return MultiPoly._raw(self.vars, _clean({e: c * sum(e) for e, c in self.terms.items()}))

    # I/O ----------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.items():
            m = "*".join(v if k == 1 else f"{v}^{k}" for v, k in mono.items())
            if not m:
                parts.append(fmt_rational(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{fmt_rational(c)}*{m}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"

    def to_json(self) -> dict:
        used = self.used_vars()
        terms = []
        for mono, c in self.items():
            terms.append({"coeff": fmt_rational(c), "exp": dict(sorted(mono.items(), key=lambda kv: var_key(kv[0])))})
        return {"vars": list(used), "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        try:
            items = [(dict(t["exp"]), parse_rational(t["coeff"])) for t in data["terms"]]
            p = cls.from_monomials(items)
            extra = [v for v in data.get("vars", []) if v not in p.vars]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        if extra:
            p = cls._raw(sort_vars(p.vars + tuple(extra)), p.with_vars(sort_vars(p.vars + tuple(extra))))
        return p


def _eval_ast(node, text: str) -> MultiPoly:
    if isinstance(node, ast.BinOp):
        left = _eval_ast(node.left, text)
        right = _eval_ast(node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise ValueError(f"division by a non-constant in {text!r}")
            return left * (1 / right.constant_term())
        if isinstance(node.op, ast.Pow):
            if not right.is_constant() or right.constant_term().denominator != 1 or right.constant_term() < 0:
                raise ValueError(f"bad exponent in {text!r}")
            return left ** int(right.constant_term())
    if isinstance(node, ast.UnaryOp):
        inner = _eval_ast(node.operand, text)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return MultiPoly.const(node.value)
    if isinstance(node, ast.Name):
        return MultiPoly.var(node.id)
    raise ValueError(f"malformed polynomial {text!r}")


class Relation:
    """A linear relation ``form = 0`` used to eliminate one variable."""

    __slots__ = ("form", "var", "solution")

    def __init__(self, form: MultiPoly, var: str):
        if form.degree() != 1:
            raise ValueError("relation must be a linear form")
        c = form.coefficient({var: 1})
        if not c:
            raise ValueError(f"{var} does not occur in the relation")
        if any(sum(e) > 1 for e in form.terms):
            raise ValueError("relation must be linear")
        rest = form - MultiPoly.var(var) * c
        self.form = form
        self.var = var
        self.solution = rest * (-1 / c)

    def __repr__(self) -> str:
        return f"Relation({self.form} = 0, eliminate {self.var})"

    def normalize(self, p: MultiPoly) -> MultiPoly:
        if self.var not in p.vars:
            return p
        return p.subs({self.var: self.solution}).drop_var(self.var)

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "eliminate": self.var}

    @classmethod
    def from_json(cls, data: Mapping) -> "Relation":
        return cls(MultiPoly.from_json(data["form"]), data["eliminate"])


def poly_normalize(p: MultiPoly, rel: Relation | None) -> MultiPoly:
    return p if rel is None else rel.normalize(p)


def expand_and_truncate(p: MultiPoly, at: str, center: MultiPoly | Scalar, order: int, t: str = "t") -> MultiPoly:
    """Image of p under at -> center + t with powers of t above ``order`` dropped."""
    center = MultiPoly.coerce(center)
    if at in center.used_vars():
        raise ValueError("center must not involve the expansion variable")
    if t in p.used_vars() or t in center.used_vars():
        raise ValueError(f"{t} already occurs")
    q = p.subs({at: center + MultiPoly.var(t)})
    if t not in q.vars:
        return q
    i = q.vars.index(t)
    return MultiPoly._raw(q.vars, {e: c for e, c in q.terms.items() if e[i] <= order})


def var(name: str) -> MultiPoly:
    return MultiPoly.var(name)


def const(c: Scalar) -> MultiPoly:
    return MultiPoly.const(c)
