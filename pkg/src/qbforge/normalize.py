"""Resolution of degenerate NAE clauses.

A NAE clause is degenerate when its verdict does not depend on any choice:
it either always has a true and a false atom (x and ¬x, or T and F) or it
can never have both (a single distinct atom such as (x), (x ∨ x), (T ∨ T)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from qbforge.exceptions import FormulaError
from qbforge.formula import Atom, Clause, Constant, Literal, QuantifiedFormula, Semantics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerdictNo:
    """Immediate no-verdict produced before any search."""

    reason: str
    clause_index: int | None = None

    def __str__(self) -> str:
        where = f" (clause {self.clause_index})" if self.clause_index is not None else ""
        return f"NO: {self.reason}{where}"


def _always_split(atoms: tuple[Atom, ...]) -> bool:
    """True if some two atoms always take different values."""
    constants = {a for a in atoms if isinstance(a, Constant)}
    if constants == {Constant.TRUE, Constant.FALSE}:
        return True
    literals = {a for a in atoms if isinstance(a, Literal)}
    return any(-lit in literals for lit in literals)


def _never_split(atoms: tuple[Atom, ...]) -> bool:
    """True if all atoms always take the same value."""
    return len(set(atoms)) == 1


def classify_nae_clause(clause: Clause) -> str:
    """Return 'tautology', 'contradiction' or 'regular'."""
    if _always_split(clause.atoms):
        return "tautology"
    if _never_split(clause.atoms):
        return "contradiction"
    return "regular"


def normalize_degenerate_clauses(formula: QuantifiedFormula) -> QuantifiedFormula | VerdictNo:
    """Drop always-nae-satisfied clauses; detect never-satisfiable ones.

    Retained clauses keep their duplicates: (x ∨ x ∨ y) stays, since it is
    nae-satisfied exactly when x ≠ y.

    Returns:
        The cleaned formula, or VerdictNo naming the first clause that can
        never be nae-satisfied.

    Raises:
        FormulaError: If the formula does not use NAE semantics.
    """
    if formula.semantics is not Semantics.NAE:
        raise FormulaError("degenerate-clause normalization needs NAE semantics", field="semantics")

    kept: list[Clause] = []
    for index, clause in enumerate(formula.matrix):
        kind = classify_nae_clause(clause)
        if kind == "contradiction":
            logger.warning("Clause %d %s can never be nae-satisfied", index, clause)
            return VerdictNo(f"clause {clause} can never be nae-satisfied", index)
        if kind == "tautology":
            logger.debug("Dropping always nae-satisfied clause %d %s", index, clause)
            continue
        kept.append(clause)

    if len(kept) == len(formula.matrix):
        return formula
    return formula.with_matrix(kept)
