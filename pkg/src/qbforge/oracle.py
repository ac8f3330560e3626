"""Ground-truth decision procedures for SAT/NAE matrices and ∀∃ formulas.

Every answer is exact: the search either finishes or raises
BudgetExceededError. Counterexamples are the lexicographically least
failing universal assignment (ascending variable id, F before T).

Usage:
    from qbforge.oracle import decide_forall_exists

    verdict = decide_forall_exists(formula)
    if verdict.answer is Answer.NO:
        print(verdict.counterexample)
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

from qbforge.config import ForgeSettings, get_config
from qbforge.exceptions import ConfigError
from qbforge.formula import Assignment, Clause, QuantifiedFormula, Semantics, evaluate_matrix
from qbforge.search import EvaluationCounter, SearchEngine, UniversalSearch, compile_matrix

logger = logging.getLogger(__name__)


class Answer(str, Enum):
    YES = "YES"
    NO = "NO"


@dataclass(frozen=True)
class Budget:
    """Limits for one oracle call.

    Args:
        max_evaluations: Search nodes the call may visit.
        enumeration_limit: Largest universal count per component decided by
            plain enumeration.
        candidate_window: Earlier universal assignments a refinement
            candidate should also cover.
    """

    max_evaluations: int
    enumeration_limit: int = 20
    candidate_window: int = 8

    def __post_init__(self) -> None:
        if self.max_evaluations <= 0:
            raise ConfigError(f"budget must be positive, got {self.max_evaluations}")
        if self.enumeration_limit < 0 or self.candidate_window < 0:
            raise ConfigError("enumeration_limit and candidate_window must not be negative")

    @classmethod
    def from_config(cls, config: ForgeSettings | None = None) -> Budget:
        config = config or get_config()
        return cls(**config.budget_limits)


@dataclass(frozen=True)
class OracleVerdict:
    """Oracle answer with its certificate.

    ``counterexample`` is present iff the answer is NO and the formula has
    universals; ``witness`` iff the answer is YES on an existential-only query.
    """

    answer: Answer
    counterexample: dict[int, bool] | None = None
    witness: dict[int, bool] | None = None
    evaluations: int = 0

    @property
    def is_yes(self) -> bool:
        return self.answer is Answer.YES

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.answer.value,
            "counterexample": _signed(self.counterexample),
            "witness": _signed(self.witness),
            "evaluations": self.evaluations,
        }


@dataclass(frozen=True)
class EquivalenceReport:
    agree: bool
    source_verdict: OracleVerdict
    target_verdict: OracleVerdict

    def to_dict(self) -> dict[str, Any]:
        return {
            "agree": self.agree,
            "source": self.source_verdict.to_dict(),
            "target": self.target_verdict.to_dict(),
        }


def _signed(assignment: Mapping[int, bool] | None) -> list[int] | None:
    if assignment is None:
        return None
    return [var if value else -var for var, value in assignment.items()]


def resolve_budget(budget: Budget | int | None) -> Budget:
    if budget is None:
        return Budget.from_config()
    if isinstance(budget, int):
        config = get_config()
        return Budget(budget, config.enumeration_limit, config.candidate_window)
    return budget


def decide_matrix(
    matrix: Iterable[Clause],
    semantics: Semantics,
    budget: Budget | int | None = None,
    *,
    fixed: Assignment | None = None,
    variables: Sequence[int] | None = None,
) -> OracleVerdict:
    """Decide an unquantified matrix, treating every free variable as existential.

    Args:
        matrix: Clauses to satisfy (constants allowed).
        semantics: SAT or NAE.
        budget: Budget, a plain evaluation limit, or None for the configured one.
        fixed: Variables treated as constants (e.g. a universal assignment).
        variables: Variables the witness must cover; defaults to the free
            variables of ``matrix``.

    Raises:
        BudgetExceededError: If the search needs more evaluations.
    """
    clauses = tuple(matrix)
    limits = resolve_budget(budget)
    fixed = dict(fixed or {})
    counter = EvaluationCounter(limits.max_evaluations)
    engine = SearchEngine(counter)

    model = engine.solve(compile_matrix(clauses, semantics, fixed))
    if model is None:
        logger.debug("Matrix of %d clauses is unsatisfiable (%d evaluations)", len(clauses), counter.used)
        return OracleVerdict(Answer.NO, evaluations=counter.used)

    if variables is None:
        variables = sorted({v for clause in clauses for v in clause.variables} - fixed.keys())
    witness = {var: model.get(var, False) for var in variables if var not in fixed}
    return OracleVerdict(Answer.YES, witness=witness, evaluations=counter.used)


def decide_forall_exists(formula: QuantifiedFormula, budget: Budget | int | None = None) -> OracleVerdict:
    """Decide a two-block ∀∃ formula exactly.

    Returns:
        YES when every universal assignment extends; otherwise NO with the
        lexicographically least failing universal assignment.

    Raises:
        BudgetExceededError: If the search needs more evaluations.
    """
    if not formula.universals:
        return decide_matrix(formula.matrix, formula.semantics, budget, variables=formula.existentials)

    limits = resolve_budget(budget)
    counter = EvaluationCounter(limits.max_evaluations)
    search = UniversalSearch(SearchEngine(counter), limits.enumeration_limit, limits.candidate_window)

    constraints = compile_matrix(formula.matrix, formula.semantics)
    failing = search.least_failing(constraints, formula.universals)
    logger.debug(
        "Decided formula with %d universals, %d existentials in %d evaluations",
        len(formula.universals),
        len(formula.existentials),
        counter.used,
    )
    if failing is None:
        return OracleVerdict(Answer.YES, evaluations=counter.used)
    counterexample = {var: failing[var] for var in formula.universals}
    return OracleVerdict(Answer.NO, counterexample=counterexample, evaluations=counter.used)


def check_equivalence(
    source: QuantifiedFormula, target: QuantifiedFormula, budget: Budget | int | None = None
) -> EquivalenceReport:
    """Decide both formulas and report whether the answers agree."""
    source_verdict = decide_forall_exists(source, budget)
    target_verdict = decide_forall_exists(target, budget)
    agree = source_verdict.answer is target_verdict.answer
    if not agree:
        logger.warning(
            "Oracle disagreement: source %s, target %s", source_verdict.answer.value, target_verdict.answer.value
        )
    return EquivalenceReport(agree, source_verdict, target_verdict)


def check_certificate(
    formula: QuantifiedFormula, verdict: OracleVerdict, budget: Budget | int | None = None
) -> bool:
    """Re-verify the certificate carried by ``verdict``.

    A witness must satisfy every clause; a counterexample must leave the
    matrix without any existential extension. Verdicts without a
    certificate are re-decided.
    """
    if verdict.witness is not None:
        assignment = {var: False for var in formula.variables}
        assignment.update(verdict.witness)
        return verdict.is_yes and evaluate_matrix(formula.matrix, assignment, formula.semantics)
    if verdict.counterexample is not None:
        if verdict.is_yes or set(verdict.counterexample) != set(formula.universals):
            return False
        refuted = decide_matrix(
            formula.matrix,
            formula.semantics,
            budget,
            fixed=verdict.counterexample,
            variables=formula.existentials,
        )
        return not refuted.is_yes
    return decide_forall_exists(formula, budget).answer is verdict.answer
