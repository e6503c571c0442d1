"""Exact rational arithmetic: Bernoulli numbers, polynomials, truncated series."""

from .bernoulli import bernoulli, regularize_poly_sum, substitute_bernoulli, substitute_powers, zeta_reg
from .interp import fit_univariate, interpolate_function, interpolate_simplex, value_at_zero
from .poly import MultiPoly, Relation, expand_and_truncate, fmt_rational, parse_rational, poly_normalize
from .series import (
    InverseLinear,
    PowerFactor,
    TruncSeries,
    bernoulli_gf,
    compose_univariate,
    derivative,
    exp_of,
    from_poly,
    inverse_of,
    laurent_invert_linear,
    product_coefficient,
)

__all__ = [
    "InverseLinear", "MultiPoly", "PowerFactor", "Relation", "TruncSeries",
    "bernoulli", "bernoulli_gf", "compose_univariate", "derivative", "exp_of",
    "expand_and_truncate", "fit_univariate", "fmt_rational", "from_poly",
    "interpolate_function", "interpolate_simplex", "inverse_of", "laurent_invert_linear",
    "parse_rational", "poly_normalize", "product_coefficient", "regularize_poly_sum",
    "substitute_bernoulli", "substitute_powers", "value_at_zero", "zeta_reg",
]
