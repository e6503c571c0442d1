"""Forgetful pushforward of DR tables, symbolic or at numeric charges."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..exactmath import MultiPoly, poly_normalize
from ..exactmath.poly import Scalar
from .strata import FineTable, push_table
from .tables import DRTable


def specialize_table(table: DRTable, b: Scalar, a: Sequence[Scalar]) -> DRTable:
    """Evaluate every entry at numeric (b, a_1..a_n); a_1 must satisfy the relation."""
    n = table.n
    if len(a) != n:
        raise ValueError(f"expected {n} charges")
    if n and sum(a) != (2 * table.g - 2 + n) * b:
        raise ValueError("charges violate a_1 + ... + a_n = (2g-2+n) b")
    values = {"b": MultiPoly.const(b)}
    values.update({f"a{i + 1}": MultiPoly.const(x) for i, x in enumerate(a)})
    return table.map(lambda s, c: c.subs(values).trim())


def forget_pushforward(table: DRTable, values: Mapping[str, Scalar] | Sequence[Scalar] | None = None) -> FineTable:
    """Push a (g, n+1) table forward along the map forgetting marking n+1.

    Without ``values`` the coefficients stay polynomial in b, a_2, ..,
    a_{n+1}.  With values (either (b, a_1, .., a_{n+1}) or a name map)
    the table is specialized first.  The result lives in the fine
    basis, since kappa classes of higher index appear.
    """
    if table.n < 1:
        raise ValueError("nothing to forget")
    if values is not None:
        if isinstance(values, Mapping):
            b = values["b"]
            a = [values[f"a{i}"] for i in range(1, table.n + 1)]
        else:
            b, *a = values
        table = specialize_table(table, b, a)
    return push_table(table.to_fine())


def substitute_table(t: FineTable, values: Mapping[str, MultiPoly | Scalar], relation=None) -> FineTable:
    return t.map(lambda s, c: poly_normalize(c.subs(values), relation).trim())
