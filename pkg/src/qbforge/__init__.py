"""qbforge: restricted ∀∃ formula gadgets, reductions, deciders and a brute-force oracle."""

__version__ = "0.1.0"

# Configuration
from qbforge.config import ForgeSettings, clear_config_cache, get_config, set_config

# Polynomial deciders
from qbforge.deciders import (
    ClauseGraph,
    DeciderAnswer,
    Verdict,
    decide_mc_nae2,
    decide_monotone_12,
    decide_monotone_s1,
    decide_monotone_s2_one_universal,
    decide_poly,
    match_decider,
    promote_monotone_12,
    refute_monotone_s2,
    simplify_mc_nae2,
)

# Exceptions
from qbforge.exceptions import (
    AllocatorExhaustedError,
    BudgetExceededError,
    ClassViolationError,
    ConfigError,
    ConflictError,
    FormulaError,
    GeneratorError,
    NotFoundError,
    ParseError,
    QbforgeError,
    ReductionError,
)

# Formula core
from qbforge.formula import (
    AppearanceProfile,
    Clause,
    Constant,
    Literal,
    QuantifiedFormula,
    Semantics,
    VariableAllocator,
    appearance_counts,
    complement_clause,
    count_appearances,
    evaluate_matrix,
    substitute,
)

# Gadgets
from qbforge.gadgets import (
    GADGET_CATALOG,
    ContractReport,
    ExtensionContract,
    GadgetInstance,
    build_E,
    build_E_forall,
    build_EQ,
    build_gadget,
    build_NE,
    build_NE_aux,
    build_P1,
    build_Q1,
    build_Q3,
    build_S,
    build_S_universal,
    build_x2,
    verify_catalog,
    verify_contract,
)

# Reductions
from qbforge.bounded import normalize_polarity, sat3_bounded_to_forallexists, strip_universal_literals
from qbforge.monotone import monotone14_to_monotone13_linear, nae_to_monotone_14
from qbforge.normalize import VerdictNo, normalize_degenerate_clauses
from qbforge.pipelines import RouteInfo, RouteRunner
from qbforge.reductions import (
    ReductionResult,
    TraceStep,
    balance_q1,
    balance_q3,
    balanced_1122_to_112x,
    balanced_2222_to_1122,
    berman_expand,
    compose,
    reduce_to_balanced_2222,
    universalize_nae,
)

# Oracle
from qbforge.oracle import (
    Answer,
    Budget,
    EquivalenceReport,
    OracleVerdict,
    check_certificate,
    check_equivalence,
    decide_forall_exists,
    decide_matrix,
)

# Instance IO
from qbforge.generate import GeneratorConfig, generate_instance
from qbforge.qext import QextDocument, export_qdimacs, parse_document, parse_qdimacs, parse_qext, serialize_qext

# Validation
from qbforge.validation import CLASS_SPECS, ClassReport, ClassSpec, require_class, validate_class

# Utilities
from qbforge.utils import format_assignment, lexicographic_assignments

__all__ = [
    "__version__",
    # Config
    "ForgeSettings",
    "get_config",
    "set_config",
    "clear_config_cache",
    # Exceptions
    "QbforgeError",
    "FormulaError",
    "ConfigError",
    "NotFoundError",
    "ConflictError",
    "ParseError",
    "BudgetExceededError",
    "AllocatorExhaustedError",
    "ReductionError",
    "ClassViolationError",
    "GeneratorError",
    # Formula core
    "Semantics",
    "Constant",
    "Literal",
    "Clause",
    "AppearanceProfile",
    "QuantifiedFormula",
    "VariableAllocator",
    "appearance_counts",
    "count_appearances",
    "complement_clause",
    "evaluate_matrix",
    "substitute",
    # Validation
    "ClassSpec",
    "ClassReport",
    "CLASS_SPECS",
    "validate_class",
    "require_class",
    # Gadgets
    "GadgetInstance",
    "ExtensionContract",
    "ContractReport",
    "GADGET_CATALOG",
    "build_gadget",
    "build_S",
    "build_S_universal",
    "build_x2",
    "build_E",
    "build_E_forall",
    "build_Q1",
    "build_Q3",
    "build_NE_aux",
    "build_EQ",
    "build_NE",
    "build_P1",
    "verify_contract",
    "verify_catalog",
    # Reductions
    "VerdictNo",
    "normalize_degenerate_clauses",
    "ReductionResult",
    "TraceStep",
    "compose",
    "universalize_nae",
    "berman_expand",
    "balance_q1",
    "balance_q3",
    "reduce_to_balanced_2222",
    "balanced_2222_to_1122",
    "balanced_1122_to_112x",
    "normalize_polarity",
    "sat3_bounded_to_forallexists",
    "strip_universal_literals",
    "nae_to_monotone_14",
    "monotone14_to_monotone13_linear",
    "RouteInfo",
    "RouteRunner",
    # Deciders
    "DeciderAnswer",
    "Verdict",
    "ClauseGraph",
    "simplify_mc_nae2",
    "decide_mc_nae2",
    "decide_monotone_s1",
    "decide_monotone_s2_one_universal",
    "decide_monotone_12",
    "promote_monotone_12",
    "refute_monotone_s2",
    "match_decider",
    "decide_poly",
    # Oracle
    "Answer",
    "Budget",
    "OracleVerdict",
    "EquivalenceReport",
    "decide_matrix",
    "decide_forall_exists",
    "check_equivalence",
    "check_certificate",
    # Instance IO
    "QextDocument",
    "parse_qext",
    "parse_document",
    "parse_qdimacs",
    "serialize_qext",
    "export_qdimacs",
    "GeneratorConfig",
    "generate_instance",
    # Utilities
    "lexicographic_assignments",
    "format_assignment",
]
