"""DR coefficient tables, the fine stratum basis, gluing and pushforward.

Tables are elements of the free module on decorated strata.  No
tautological relations are imposed, so equality of two tables is a
stronger statement than equality of the classes they represent.
"""

from .push import forget_pushforward, specialize_table, substitute_table
from .strata import FineStratum, FineTable, glue_fine, glue_pairs, glue_table, push_forget_last, push_table
from .tables import (
    BudgetError,
    DecoratedStratum,
    DivisorMonomial,
    DRTable,
    apply_drd,
    assemble_dr,
    extract_coefficient,
)

__all__ = [
    "BudgetError", "DRTable", "DecoratedStratum", "DivisorMonomial", "FineStratum", "FineTable",
    "apply_drd", "assemble_dr", "extract_coefficient", "forget_pushforward", "glue_fine", "glue_pairs",
    "glue_table", "push_forget_last", "push_table", "specialize_table", "substitute_table",
]
