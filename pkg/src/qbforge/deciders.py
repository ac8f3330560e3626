"""Polynomial-time deciders for monotone NAE families.

- ``decide_mc_nae2``: monotone NAE with constants, every variable twice.
- ``decide_monotone_s1``: monotone ∀∃ NAE-3-SAT-(s,1).
- ``decide_monotone_s2_one_universal``: (s,2) with one universal per clause.
- ``decide_monotone_12``: monotone ∀∃ NAE-3-SAT-(1,2) by universal promotion.
- ``refute_monotone_s2``: co-NP check of a universal assignment for (s,2).

Each decider validates its class first and raises ClassViolationError on a
formula outside it.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import Enum
from typing import Any

import networkx as nx

from qbforge.exceptions import FormulaError, NotFoundError
from qbforge.formula import Assignment, Clause, Constant, QuantifiedFormula, substitute, substitute_clause
from qbforge.validation import require_class, validate_class

logger = logging.getLogger(__name__)


class DeciderAnswer(str, Enum):
    YES = "YES"
    NO = "NO"
    TRIVIAL_YES = "TRIVIAL-YES"


@dataclass(frozen=True)
class Verdict:
    """Decider answer with the rule that produced it.

    ``counterexample`` is a universal assignment without an existential
    extension; ``clause_index`` points at the clause the rule fired on.
    """

    answer: DeciderAnswer
    reason: str
    decider: str = ""
    counterexample: dict[int, bool] | None = None
    clause_index: int | None = None
    steps: int = 0

    @property
    def is_yes(self) -> bool:
        return self.answer is not DeciderAnswer.NO

    def to_dict(self) -> dict[str, Any]:
        counterexample = None
        if self.counterexample is not None:
            counterexample = [v if b else -v for v, b in self.counterexample.items()]
        return {
            "verdict": self.answer.value,
            "decider": self.decider,
            "reason": self.reason,
            "counterexample": counterexample,
            "clause": self.clause_index,
            "steps": self.steps,
        }


# ----------------------------------------------------------------------
# Clause graph
# ----------------------------------------------------------------------


class ClauseGraph:
    """Clauses as vertices, an edge between two clauses sharing a variable.

    Only defined for linear monotone matrices where every variable appears
    exactly twice and every clause has at least two distinct variables.

    Raises:
        FormulaError: If the matrix is outside that shape.
    """

    def __init__(self, matrix: tuple[Clause, ...] | list[Clause]):
        self.matrix = tuple(matrix)
        owners: dict[int, list[int]] = {}
        for index, clause in enumerate(self.matrix):
            if not clause.is_monotone or len(clause.variables) < 2:
                raise FormulaError(f"clause {index} {clause} cannot be a clause-graph vertex", field="matrix")
            for var in clause.variables:
                owners.setdefault(var, []).append(index)

        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(len(self.matrix)))
        for var, clauses in owners.items():
            if len(clauses) != 2:
                raise FormulaError(f"variable {var} appears {len(clauses)} times, expected 2", field="matrix")
            first, second = clauses
            if self.graph.has_edge(first, second):
                raise FormulaError(f"clauses {first} and {second} share two variables", field="matrix")
            self.graph.add_edge(first, second, variable=var)

    def components(self) -> list[set[int]]:
        return [set(c) for c in nx.connected_components(self.graph)]

    def classify(self, component: set[int]) -> str:
        """'odd-cycle' if the component is a cycle of odd length, else 'other'."""
        sub = self.graph.subgraph(component)
        is_cycle = len(component) >= 3 and all(degree == 2 for _, degree in sub.degree())
        return "odd-cycle" if is_cycle and len(component) % 2 == 1 else "other"

    def summary(self) -> Counter[str]:
        return Counter(self.classify(c) for c in self.components())


# ----------------------------------------------------------------------
# MC-NAE-3-SAT-2
# ----------------------------------------------------------------------


class _McSimplifier:
    """Residual clause list for the MC decider, one method per step."""

    def __init__(self, formula: QuantifiedFormula):
        self.formula = formula
        self.clauses = list(formula.matrix)
        self.fixed: dict[int, bool] = {}
        self.steps = 0
        self.failed: int | None = None

    def constant_pairs(self) -> None:
        """Resolve clauses with one variable and two constants, to fixpoint."""
        rounds = 0
        while True:
            target = next(
                (i for i, c in enumerate(self.clauses) if len(c.literals) == 1 and len(c.constants) == 2), None
            )
            if target is None:
                break
            rounds += 1
            clause = self.clauses.pop(target)
            var = clause.literals[0].var
            first, second = clause.constants
            if first is second:
                value = not first.truth
                self.fixed[var] = value
                mapping = {var: Constant.of(value)}
                self.clauses = [substitute_clause(c, mapping) for c in self.clauses]
                logger.debug("Constant pair forces %d = %s", var, value)
        self.steps += rounds
        logger.debug("Constant-pair step finished after %d rounds", rounds)

    def shared_pairs(self) -> None:
        """Drop two clauses that share two variables; x ≠ x' nae-satisfies both."""
        while True:
            seen: dict[tuple[int, int], int] = {}
            hit: tuple[int, int] | None = None
            for index, clause in enumerate(self.clauses):
                vars_ = sorted(clause.variables)
                for i in range(len(vars_)):
                    for j in range(i + 1, len(vars_)):
                        other = seen.setdefault((vars_[i], vars_[j]), index)
                        if other != index:
                            hit = (other, index)
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit is None:
                return
            self.steps += 1
            first, second = hit
            logger.debug("Removing clauses %s and %s sharing two variables", self.clauses[first], self.clauses[second])
            del self.clauses[second]
            del self.clauses[first]

    def single_appearances(self) -> None:
        """Drop clauses holding a variable that appears nowhere else, to fixpoint."""
        while True:
            counts = Counter(var for clause in self.clauses for var in clause.variables)
            target = next(
                (i for i, c in enumerate(self.clauses) if any(counts[v] == 1 for v in c.variables)), None
            )
            if target is None:
                return
            self.steps += 1
            clause = self.clauses.pop(target)
            constants = clause.constants
            if len(constants) == 2 and constants[0] is constants[1]:
                logger.debug("Single-appearance removal of %s relies on equal constants", clause)

    def constant_clauses(self) -> None:
        """Drop all-constant clauses holding both T and F; record the first all-equal one."""
        kept: list[Clause] = []
        for clause in self.clauses:
            self.steps += 1
            if clause.literals:
                kept.append(clause)
            elif len(set(clause.constants)) == 2:
                continue
            else:
                kept.append(clause)
                if self.failed is None:
                    self.failed = len(kept) - 1
        self.clauses = kept

    def run(self, upto: int) -> None:
        for number, step in enumerate(
            (self.constant_pairs, self.shared_pairs, self.single_appearances, self.constant_clauses), start=1
        ):
            if number > upto:
                return
            step()

    def residual(self) -> QuantifiedFormula:
        return QuantifiedFormula(
            existentials=tuple(v for v in self.formula.existentials if v not in self.fixed),
            matrix=tuple(self.clauses),
            semantics=self.formula.semantics,
            constants_allowed=True,
        )


def simplify_mc_nae2(formula: QuantifiedFormula, upto: int = 4) -> QuantifiedFormula:
    """Residual formula after the first ``upto`` simplification steps (1 to 4).

    Every residual is nae-satisfiable exactly when ``formula`` is; an
    all-equal constant clause is kept by step 4.
    """
    require_class(formula, "mc-nae2", route="decide:mc-nae2")
    simplifier = _McSimplifier(formula)
    simplifier.run(upto)
    return simplifier.residual()


def decide_mc_nae2(formula: QuantifiedFormula) -> Verdict:
    """Decide MC-NAE-3-SAT-2 in polynomial time.

    Steps: resolve constant pairs (with substitution, to fixpoint); remove
    clause pairs sharing two variables; remove clauses with a
    single-appearance variable; reject on an all-equal constant clause.
    What remains is linear with at most one constant per clause and is
    always nae-satisfiable: components of its clause graph that are odd
    cycles are satisfied through their constants, every other component by
    the two-colouring argument.
    """
    require_class(formula, "mc-nae2", route="decide:mc-nae2")
    simplifier = _McSimplifier(formula)
    simplifier.run(4)
    size = len(formula.variables) + len(formula.matrix)
    assert simplifier.steps <= 4 * size * size + 4, "MC decider exceeded its step bound"

    if simplifier.failed is not None:
        clause = simplifier.clauses[simplifier.failed]
        return Verdict(
            DeciderAnswer.NO,
            f"clause {clause} has three equal constants",
            decider="mc-nae2",
            steps=simplifier.steps,
        )
    stripped = [Clause(c.literals) for c in simplifier.clauses]
    kinds = ClauseGraph(stripped).summary()
    return Verdict(
        DeciderAnswer.YES,
        f"{len(stripped)} clauses remain: {kinds['odd-cycle']} odd-cycle and {kinds['other']} other components",
        decider="mc-nae2",
        steps=simplifier.steps,
    )


# ----------------------------------------------------------------------
# Monotone ∀∃ NAE-3-SAT deciders
# ----------------------------------------------------------------------


def decide_monotone_s1(formula: QuantifiedFormula) -> Verdict:
    """(s,1): yes iff every clause has an existential variable.

    An all-universal clause is broken by setting every universal to F.
    """
    require_class(formula, "mono-s1", route="decide:mono-s1")
    existentials = set(formula.existentials)
    for index, clause in enumerate(formula.matrix):
        if not any(var in existentials for var in clause.variables):
            return Verdict(
                DeciderAnswer.NO,
                f"clause {index} {clause} has no existential variable",
                decider="mono-s1",
                counterexample=dict.fromkeys(formula.universals, False),
                clause_index=index,
                steps=index + 1,
            )
    return Verdict(
        DeciderAnswer.YES, "every clause has an existential variable", decider="mono-s1", steps=len(formula.matrix)
    )


def decide_monotone_s2_one_universal(formula: QuantifiedFormula) -> Verdict:
    """(s,2) with at most one universal per clause is always a yes-instance.

    Runs the shared-pair and single-appearance simplification on the
    existentials as a sanity pass and reports what remains.
    """
    require_class(formula, "mono-s2-1u", route="decide:mono-s2-1u")
    universals = set(formula.universals)
    projected = QuantifiedFormula(
        existentials=formula.existentials,
        matrix=tuple(Clause.of(*(lit for lit in c.literals if lit.var not in universals)) for c in formula.matrix),
        semantics=formula.semantics,
    )
    simplifier = _McSimplifier(projected)
    simplifier.shared_pairs()
    simplifier.single_appearances()
    logger.debug("Sanity pass left %d of %d clauses", len(simplifier.clauses), len(formula.matrix))
    return Verdict(
        DeciderAnswer.TRIVIAL_YES,
        f"at most one universal per clause; {len(simplifier.clauses)} clauses left after simplification",
        decider="mono-s2-1u",
        steps=simplifier.steps,
    )


def _count_universals(clause: Clause, universals: set[int]) -> int:
    return sum(1 for var in clause.variables if var in universals)


def _promotion_candidate(clauses: Iterable[tuple[int, Clause]], universals: set[int]) -> int | None:
    return next((i for i, c in clauses if _count_universals(c, universals) == 2), None)


def promote_monotone_12(formula: QuantifiedFormula) -> QuantifiedFormula | None:
    """Apply one promotion of ``decide_monotone_12`` to the formula itself.

    The first clause with exactly two universals is removed and its
    existential moves to the universal block. Returns None when no such
    clause is left. The result keeps the truth value of ``formula`` but is
    generally outside mono12, since the two universals no longer appear.
    """
    universals = set(formula.universals)
    index = _promotion_candidate(enumerate(formula.matrix), universals)
    if index is None:
        return None
    x = next(var for var in formula.matrix[index].variables if var not in universals)
    logger.debug("Promoting %d by removing clause %d", x, index)
    return QuantifiedFormula(
        universals=(*formula.universals, x),
        existentials=tuple(var for var in formula.existentials if var != x),
        matrix=formula.matrix[:index] + formula.matrix[index + 1 :],
        semantics=formula.semantics,
        constants_allowed=formula.constants_allowed,
    )


def decide_monotone_12(formula: QuantifiedFormula) -> Verdict:
    """(1,2) by promotion.

    While some clause (x ∨ u ∨ u') has one existential and two universals,
    delete it and make x a universal in its other clause: the adversary
    forces x = ¬u by choosing u = u'. Three universals in one clause is a
    no-instance. The NO counterexample follows the promotions back to the
    original universals so that the final clause is all false.
    """
    require_class(formula, "mono12", route="decide:mono12")
    universals = set(formula.universals)
    clauses: dict[int, Clause] = dict(enumerate(formula.matrix))
    # promoted existential -> the two universals whose equal value forces it
    promoted: dict[int, tuple[int, int]] = {}
    steps = 0

    while True:
        steps += 1
        full = next((i for i, c in clauses.items() if _count_universals(c, universals) == 3), None)
        if full is not None:
            counterexample = _promotion_counterexample(formula, clauses[full], promoted)
            return Verdict(
                DeciderAnswer.NO,
                f"clause {full} {formula.matrix[full]} ends with three universals",
                decider="mono12",
                counterexample=counterexample,
                clause_index=full,
                steps=steps,
            )
        index = _promotion_candidate(clauses.items(), universals)
        if index is None:
            break
        clause = clauses.pop(index)
        x = next(var for var in clause.variables if var not in universals)
        pair = tuple(var for var in clause.variables if var in universals)
        promoted[x] = (pair[0], pair[1])
        universals.add(x)
        logger.debug("Promoted %d to universal after removing clause %d", x, index)

    assert steps <= len(formula.matrix) + 1, "promotion loop exceeded its step bound"
    return Verdict(
        DeciderAnswer.YES,
        f"no clause keeps two universals after {len(promoted)} promotions",
        decider="mono12",
        steps=steps,
    )


def _promotion_counterexample(
    formula: QuantifiedFormula, clause: Clause, promoted: dict[int, tuple[int, int]]
) -> dict[int, bool]:
    wanted: dict[int, bool] = {}
    stack = [(var, False) for var in clause.variables]
    while stack:
        var, value = stack.pop()
        if var in promoted:
            stack.extend((source, not value) for source in promoted[var])
        else:
            wanted[var] = value
    return {u: wanted.get(u, False) for u in formula.universals}


def refute_monotone_s2(formula: QuantifiedFormula, universal_assignment: Assignment) -> bool:
    """True iff fixing the universals as given leaves no nae-satisfying extension.

    The substituted formula is an MC-NAE-3-SAT-2 instance, decided by
    ``decide_mc_nae2``.
    """
    require_class(formula, "mono-s2", route="refute:mono-s2")
    missing = [u for u in formula.universals if u not in universal_assignment]
    if missing:
        raise FormulaError(f"universal assignment misses {missing}", field="universal_assignment")
    instance = substitute(formula, {u: Constant.of(universal_assignment[u]) for u in formula.universals})
    verdict = decide_mc_nae2(instance)
    logger.debug("Refutation check: %s", verdict.reason)
    return verdict.answer is DeciderAnswer.NO


# ----------------------------------------------------------------------
# Dispatch
# ----------------------------------------------------------------------

POLY_DECIDERS: tuple[tuple[str, Callable[[QuantifiedFormula], Verdict]], ...] = (
    ("mc-nae2", decide_mc_nae2),
    ("mono-s1", decide_monotone_s1),
    ("mono12", decide_monotone_12),
    ("mono-s2-1u", decide_monotone_s2_one_universal),
)


def match_decider(formula: QuantifiedFormula) -> str | None:
    """Name of the first decider whose class contains ``formula``."""
    for name, _ in POLY_DECIDERS:
        if validate_class(formula, name).passed:
            return name
    return None


def decide_poly(formula: QuantifiedFormula) -> Verdict:
    """Run the first matching polynomial decider.

    Raises:
        NotFoundError: If no decider's class contains ``formula``.
    """
    name = match_decider(formula)
    if name is None:
        raise NotFoundError("decider", "no polynomial decider matches this formula")
    logger.info("Dispatching to decider %s", name)
    return dict(POLY_DECIDERS)[name](formula)

