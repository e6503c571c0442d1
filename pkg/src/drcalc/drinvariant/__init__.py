"""Evaluators for the DR graph invariant C(G)."""

from .core import (
    CACHE,
    GraphInvariant,
    InvariantCache,
    SpecializationData,
    ambient_relation,
    cg_oracle,
    cg_top,
    cg_zagier,
    charge_relation,
    dr_coeff,
    evaluate,
    specialize,
    vertex_charges,
)
from .oracle import OracleError, cg_oracle_poly, constant_in_r, weighting_sum
from .zagier import ZagierError, zagier_value

__all__ = [
    "CACHE", "GraphInvariant", "InvariantCache", "OracleError", "SpecializationData", "ZagierError",
    "ambient_relation", "cg_oracle", "cg_oracle_poly", "cg_top", "cg_zagier", "charge_relation",
    "constant_in_r", "dr_coeff", "evaluate", "specialize", "vertex_charges", "weighting_sum", "zagier_value",
]
