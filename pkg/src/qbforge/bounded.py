"""Bounded-occurrence 3-SAT → ∀∃ 3-SAT with one-appearance universals.

A 3-SAT-(3) formula (every variable unnegated twice and negated once, 2- and
3-clauses over distinct variables) becomes a ∀∃ instance by giving each
2-clause its own fresh universal. The reverse direction, deleting universal
literals, decides any ∀∃ SAT formula whose universals appear at most once.
"""

from __future__ import annotations

import logging

from qbforge.exceptions import ReductionError
from qbforge.formula import (
    Assignment,
    Clause,
    Literal,
    QuantifiedFormula,
    Semantics,
    VariableAllocator,
    appearance_counts,
    substitute_clause,
)
from qbforge.normalize import VerdictNo
from qbforge.reductions import ReductionResult, TraceStep
from qbforge.validation import require_class

logger = logging.getLogger(__name__)

# variant name -> (negate universal literals, negate existential literals, profile digits)
VARIANTS: dict[str, tuple[bool, bool, str]] = {
    "base": (False, False, "1021"),
    "I": (True, False, "0121"),
    "II": (False, True, "1012"),
    "III": (True, True, "0112"),
}


def resolve_variant(variant: str) -> tuple[str, bool, bool, str]:
    """Accept a variant name (base, I, II, III) or its profile digits (1021, (0,1,2,1), ...).

    Raises:
        ReductionError: For an unknown variant.
    """
    digits = "".join(ch for ch in variant if ch.isdigit())
    for name, (neg_universal, neg_existential, profile) in VARIANTS.items():
        if variant == name or (digits and digits == profile):
            return name, neg_universal, neg_existential, profile
    raise ReductionError(f"unknown variant {variant!r}; expected one of base, I, II, III or their profiles")


def normalize_polarity(formula: QuantifiedFormula) -> QuantifiedFormula:
    """Negate every literal of each variable appearing (1,2) so all variables appear (2,1).

    Raises:
        ReductionError: If some variable appears neither (2,1) nor (1,2).
    """
    counts = appearance_counts(formula)
    flips: dict[int, Literal] = {}
    for var in formula.variables:
        profile = counts[var]
        if profile == (1, 2):
            flips[var] = Literal(var, True)
        elif profile != (2, 1):
            raise ReductionError(
                f"variable {var} appears {profile}, expected (2,1) or (1,2)", route="normalize-polarity", variable=var
            )
    if not flips:
        return formula
    logger.debug("Flipping polarity of %d variables", len(flips))
    return formula.with_matrix([substitute_clause(clause, flips) for clause in formula.matrix])


def sat3_bounded_to_forallexists(
    formula: QuantifiedFormula, variant: str = "base", alloc: VariableAllocator | None = None
) -> ReductionResult:
    """3-SAT-(3) → ∀∃ 3-SAT-(1,0,2,1) and its three negation variants.

    Each 2-clause C_j becomes C_j ∨ y_j for a fresh universal y_j. Variant I
    negates the universal literals, II the existential literals, III both.

    Raises:
        ClassViolationError: If ``formula`` is not a 3-SAT-(3) instance.
    """
    name, neg_universal, neg_existential, profile = resolve_variant(variant)
    route = f"3sat3-to-ae:{profile}"
    require_class(formula, "3sat3", route=route)
    alloc = alloc or VariableAllocator.after(formula)

    flips = {x: Literal(x, True) for x in formula.existentials} if neg_existential else {}
    guards: list[int] = []
    matrix: list[Clause] = []
    for clause in formula.matrix:
        clause = substitute_clause(clause, flips) if flips else clause
        if len(clause) == 2:
            y = alloc.fresh(f"guard[{len(guards) + 1}]")
            guards.append(y)
            clause = Clause(clause.atoms + (Literal(y, neg_universal),))
        matrix.append(clause)

    target = QuantifiedFormula(
        universals=tuple(guards),
        existentials=formula.existentials,
        matrix=tuple(matrix),
        semantics=Semantics.SAT,
    )
    # the adversary makes every guard literal false
    adversarial = neg_universal

    def forward(beta: Assignment, chosen: Assignment) -> dict[int, bool]:
        out = {x: beta[x] != neg_existential for x in formula.existentials}
        out.update({y: chosen.get(y, adversarial) for y in guards})
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        return {x: beta[x] != neg_existential for x in formula.existentials}

    def lift(_: Assignment) -> dict[int, bool]:
        return dict.fromkeys(guards, adversarial)

    logger.debug("Variant %s added %d guard universals", name, len(guards))
    return ReductionResult(
        route=route,
        source=formula,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(TraceStep(route, f"guard each 2-clause with a fresh universal ({name})", 0, len(guards)),),
        labels={y: alloc.labels.get(y, "") for y in guards},
    )


def strip_universal_literals(formula: QuantifiedFormula) -> ReductionResult | VerdictNo:
    """Delete every universal literal, leaving an unquantified SAT matrix.

    With each universal appearing at most once, the adversary's best move is
    to make every universal literal false, so the ∀∃ formula is a
    yes-instance iff the stripped matrix is satisfiable. A clause that
    shrinks to nothing gives an immediate no-verdict.

    Raises:
        ReductionError: On NAE semantics or a universal appearing twice.
    """
    route = "strip-universals"
    if formula.semantics is not Semantics.SAT:
        raise ReductionError("stripping universals needs SAT semantics", route=route)
    counts = appearance_counts(formula)
    for x in formula.universals:
        if sum(counts[x]) > 1:
            raise ReductionError(f"universal variable {x} appears {sum(counts[x])} times", route=route, variable=x)

    universals = set(formula.universals)
    polarity: dict[int, bool] = {}
    matrix: list[Clause] = []
    for index, clause in enumerate(formula.matrix):
        kept = []
        for atom in clause.atoms:
            if isinstance(atom, Literal) and atom.var in universals:
                polarity[atom.var] = atom.negated
            else:
                kept.append(atom)
        if not kept:
            logger.warning("Clause %d %s has only universal literals", index, clause)
            return VerdictNo(f"clause {clause} has only universal literals", index)
        matrix.append(Clause(tuple(kept)))

    target = QuantifiedFormula(existentials=formula.existentials, matrix=tuple(matrix), semantics=Semantics.SAT)

    def forward(beta: Assignment, _: Assignment) -> dict[int, bool]:
        return {x: beta[x] for x in formula.existentials}

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {x: polarity.get(x, False) for x in formula.universals}
        out.update({x: beta[x] for x in formula.existentials})
        return out

    return ReductionResult(
        route=route,
        source=formula,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lambda _: {},
        trace=(TraceStep(route, "delete universal literals", 0, -len(formula.universals)),),
    )
