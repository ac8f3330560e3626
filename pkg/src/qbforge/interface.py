"""Public interface for qbforge.

Re-exports the primary types and functions that consumers should use.
"""

from qbforge.config import ForgeSettings, get_config, set_config
from qbforge.deciders import Verdict, decide_poly
from qbforge.exceptions import (
    BudgetExceededError,
    ClassViolationError,
    FormulaError,
    NotFoundError,
    ParseError,
    QbforgeError,
    ReductionError,
)
from qbforge.formula import Clause, Literal, QuantifiedFormula, Semantics
from qbforge.oracle import OracleVerdict, check_equivalence, decide_forall_exists
from qbforge.pipelines import RouteRunner
from qbforge.qext import parse_qext, serialize_qext
from qbforge.reductions import ReductionResult
from qbforge.validation import validate_class

__all__ = [
    # Config
    "ForgeSettings",
    "get_config",
    "set_config",
    # Formulas
    "Literal",
    "Clause",
    "QuantifiedFormula",
    "Semantics",
    "parse_qext",
    "serialize_qext",
    "validate_class",
    # Reductions and deciding
    "RouteRunner",
    "ReductionResult",
    "decide_forall_exists",
    "check_equivalence",
    "OracleVerdict",
    "decide_poly",
    "Verdict",
    # Exceptions
    "QbforgeError",
    "FormulaError",
    "ParseError",
    "NotFoundError",
    "ReductionError",
    "ClassViolationError",
    "BudgetExceededError",
]
