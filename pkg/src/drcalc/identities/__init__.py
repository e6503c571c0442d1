"""Mechanical checks of the series identities and the DR table theorems."""

from .globalchecks import (
    check_codim_minus_deg,
    check_dr_push,
    check_dr_push_numeric,
    check_topdeg_global,
    orbit_count,
    orbit_formula,
    twisted_spec,
)
from .pergraph import (
    aux_lemma_difference,
    check_aux_lemma,
    check_corollary_inversion,
    check_topdeg_per_graph,
    check_unidr_delta,
    twisted_sum,
)
from .qbar import check_qbar, qbar_series, qhat_series
from .report import CheckReport
from .scalar import check_scalar_identities
from .suite import SUITES, run_suite, suite_ok

__all__ = [
    "CheckReport", "SUITES", "aux_lemma_difference", "check_aux_lemma", "check_codim_minus_deg",
    "check_corollary_inversion", "check_dr_push", "check_dr_push_numeric", "check_qbar",
    "check_scalar_identities", "check_topdeg_global", "check_topdeg_per_graph", "check_unidr_delta",
    "orbit_count", "orbit_formula", "qbar_series", "qhat_series", "run_suite", "suite_ok", "twisted_spec",
    "twisted_sum",
]
