"""Balanced ∀∃ reductions: NAE → (2,2,2,2) → (1,1,2,2) → (1,1,2,1)/(1,1,1,2).

Every reduction returns a ``ReductionResult`` holding the target formula
and the witness maps that mirror its correctness argument:

- ``forward_witness``: a source assignment (universals and existentials)
  to a target assignment that satisfies the target whenever the source one
  does. Fresh target universals take the values passed in ``universals``,
  defaulting to the adversarial choice of ``lift_universals``.
- ``backward_witness``: a target assignment back to the source variables.
- ``lift_universals``: a source universal assignment to the target
  universal assignment used when arguing target-yes ⇒ source-yes.

Appearances are numbered in clause-then-atom order throughout, and fresh
copies are always allocated before gadget internals.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from qbforge.exceptions import ReductionError
from qbforge.formula import (
    AppearanceProfile,
    Assignment,
    Atom,
    Clause,
    Literal,
    QuantifiedFormula,
    Semantics,
    VariableAllocator,
    appearance_counts,
    complement_clause,
    substitute_clause,
)
from qbforge.gadgets import (
    GadgetInstance,
    build_E,
    build_E_forall,
    build_Q1,
    build_Q3,
    build_S_universal,
    build_x2,
    complete_by_template,
)
from qbforge.normalize import VerdictNo, normalize_degenerate_clauses
from qbforge.validation import require_class

logger = logging.getLogger(__name__)

ForwardMap = Callable[[Assignment, Assignment], dict[int, bool]]
AssignmentMap = Callable[[Assignment], dict[int, bool]]
Position = tuple[int, int]


@dataclass(frozen=True)
class TraceStep:
    """One named construction step and what it added."""

    name: str
    description: str
    clauses_added: int = 0
    variables_added: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "step": self.name,
            "description": self.description,
            "clauses_added": self.clauses_added,
            "variables_added": self.variables_added,
        }


@dataclass(frozen=True)
class ReductionResult:
    """Target formula plus witness translation in both directions."""

    route: str
    source: QuantifiedFormula
    target: QuantifiedFormula
    forward_map: ForwardMap = field(repr=False)
    backward_map: AssignmentMap = field(repr=False)
    lift_map: AssignmentMap = field(repr=False)
    trace: tuple[TraceStep, ...] = ()
    labels: dict[int, str] = field(default_factory=dict, repr=False)

    def forward_witness(self, assignment: Assignment, universals: Assignment | None = None) -> dict[int, bool]:
        return self.forward_map(assignment, universals or {})

    def backward_witness(self, assignment: Assignment) -> dict[int, bool]:
        return self.backward_map(assignment)

    def lift_universals(self, assignment: Assignment) -> dict[int, bool]:
        return self.lift_map(assignment)

    def to_dict(self) -> dict[str, Any]:
        return {
            "route": self.route,
            "source": {"variables": len(self.source.variables), "clauses": len(self.source.matrix)},
            "target": {
                "universals": len(self.target.universals),
                "existentials": len(self.target.existentials),
                "clauses": len(self.target.matrix),
            },
            "trace": [step.to_dict() for step in self.trace],
        }


def compose(first: ReductionResult, second: ReductionResult, route: str | None = None) -> ReductionResult:
    """Chain two reductions; ``second.source`` must be ``first.target``."""
    if second.source is not first.target and second.source != first.target:
        raise ReductionError("cannot compose: second source is not the first target", route=route)

    def forward(beta: Assignment, chosen: Assignment) -> dict[int, bool]:
        return second.forward_map(first.forward_map(beta, chosen), chosen)

    def backward(beta: Assignment) -> dict[int, bool]:
        return first.backward_map(second.backward_map(beta))

    def lift(sigma: Assignment) -> dict[int, bool]:
        return second.lift_map(first.lift_map(sigma))

    return ReductionResult(
        route=route or f"{first.route}+{second.route}",
        source=first.source,
        target=second.target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=first.trace + second.trace,
        labels={**first.labels, **second.labels},
    )


def compose_all(results: Sequence[ReductionResult], route: str) -> ReductionResult:
    combined = results[0]
    for result in results[1:]:
        combined = compose(combined, result)
    return ReductionResult(
        route=route,
        source=combined.source,
        target=combined.target,
        forward_map=combined.forward_map,
        backward_map=combined.backward_map,
        lift_map=combined.lift_map,
        trace=combined.trace,
        labels=combined.labels,
    )


def identity_result(route: str, source: QuantifiedFormula, target: QuantifiedFormula) -> ReductionResult:
    """Result for a step that keeps the variables and only edits clauses."""
    return ReductionResult(
        route=route,
        source=source,
        target=target,
        forward_map=lambda beta, _: dict(beta),
        backward_map=lambda beta: {var: beta[var] for var in source.variables},
        lift_map=lambda sigma: dict(sigma),
        trace=(TraceStep(route, "clause-level rewrite", len(target.matrix) - len(source.matrix), 0),),
    )


# ----------------------------------------------------------------------
# Appearance splitting
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPlan:
    """Appearances of one variable, split by polarity, in clause-then-atom order."""

    variable: int
    positions: tuple[Position, ...]
    unnegated: tuple[Position, ...]
    negated: tuple[Position, ...]

    @property
    def u(self) -> int:
        return len(self.unnegated)

    @property
    def n(self) -> int:
        return len(self.negated)

    @property
    def a(self) -> int:
        return self.u + self.n


def plan_splits(matrix: Sequence[Clause], variables: Iterable[int]) -> dict[int, SplitPlan]:
    wanted = set(variables)
    positions: dict[int, list[Position]] = {v: [] for v in wanted}
    signs: dict[Position, bool] = {}
    for ci, clause in enumerate(matrix):
        for ai, atom in enumerate(clause.atoms):
            if isinstance(atom, Literal) and atom.var in wanted:
                positions[atom.var].append((ci, ai))
                signs[(ci, ai)] = atom.negated
    return {
        var: SplitPlan(
            var,
            tuple(spots),
            tuple(p for p in spots if not signs[p]),
            tuple(p for p in spots if signs[p]),
        )
        for var, spots in positions.items()
    }


def replace_atoms(matrix: Sequence[Clause], replacements: Mapping[Position, Atom]) -> list[Clause]:
    out: list[Clause] = []
    for ci, clause in enumerate(matrix):
        atoms = tuple(replacements.get((ci, ai), atom) for ai, atom in enumerate(clause.atoms))
        out.append(Clause(atoms))
    return out


def require_semantics(formula: QuantifiedFormula, semantics: Semantics, route: str) -> None:
    if formula.semantics is not semantics:
        raise ReductionError(
            f"route {route} needs {semantics.value} semantics, got {formula.semantics.value}", route=route
        )


def require_constant_free(formula: QuantifiedFormula, route: str) -> None:
    for index, clause in enumerate(formula.matrix):
        if clause.constants:
            raise ReductionError(f"clause {index} contains a constant", route=route)


def _labels(alloc: VariableAllocator, variables: Iterable[int]) -> dict[int, str]:
    return {var: alloc.labels.get(var, "") for var in variables}


def complete_gadget_chain(gadgets: Sequence[GadgetInstance], known: Mapping[int, bool]) -> dict[int, bool]:
    out: dict[int, bool] = {}
    for gadget in gadgets:
        part = complete_by_template(gadget, {**known, **out})
        if part is None:
            raise ReductionError(f"gadget {gadget.name} has no extension for the forwarded assignment")
        out.update(part)
    return out


# ----------------------------------------------------------------------
# NAE → balanced (2,2,2,2)
# ----------------------------------------------------------------------


def universalize_nae(formula: QuantifiedFormula, alloc: VariableAllocator | None = None) -> ReductionResult:
    """Move every universal x into the existential block as y, tied to a fresh universal z.

    Appends (¬z ∨ y)(z ∨ ¬y) per universal; under NAE each link forces y = z.
    """
    route = "universalize"
    require_semantics(formula, Semantics.NAE, route)
    require_constant_free(formula, route)
    alloc = alloc or VariableAllocator.after(formula)

    triples: list[tuple[int, int, int]] = []
    for x in formula.universals:
        z = alloc.fresh(f"z[{x}]")
        y = alloc.fresh(f"y[{x}]")
        triples.append((x, z, y))

    mapping: dict[int, Atom] = {x: Literal(y) for x, _, y in triples}
    matrix = [substitute_clause(clause, mapping) for clause in formula.matrix]
    for _, z, y in triples:
        matrix.append(Clause((Literal(z, True), Literal(y))))
        matrix.append(Clause((Literal(z), Literal(y, True))))

    target = QuantifiedFormula(
        universals=tuple(z for _, z, _ in triples),
        existentials=tuple(y for _, _, y in triples) + formula.existentials,
        matrix=tuple(matrix),
        semantics=Semantics.NAE,
    )
    logger.debug("Universalized %d universal variables", len(triples))

    def forward(beta: Assignment, _: Assignment) -> dict[int, bool]:
        out = {e: beta[e] for e in formula.existentials}
        for x, z, y in triples:
            out[z] = out[y] = beta[x]
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {e: beta[e] for e in formula.existentials}
        out.update({x: beta[y] for x, _, y in triples})
        return out

    def lift(sigma: Assignment) -> dict[int, bool]:
        return {z: sigma[x] for x, z, _ in triples}

    return ReductionResult(
        route=route,
        source=formula,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(TraceStep(route, "rename universals, add z/y links", 2 * len(triples), 2 * len(triples)),),
        labels=_labels(alloc, (v for _, z, y in triples for v in (z, y))),
    )


def berman_expand(formula: QuantifiedFormula, alloc: VariableAllocator | None = None) -> ReductionResult:
    """Turn an NAE formula into a SAT formula where every existential appears (2,2).

    Steps: split existential appearances into copies; pair each clause with
    its complement; chain the copies of each variable in a cycle of
    implications; patch every 2-clause with ¬u and the enforcer E(u).
    Existentials with no appearance are dropped; one with a single
    appearance first gets the always nae-satisfied clause (w ∨ ¬w).

    Raises:
        ReductionError: On a constant, a 1-clause, or a universal repeated
            within a clause, naming the offending variable.
    """
    route = "berman-expand"
    require_semantics(formula, Semantics.NAE, route)
    require_constant_free(formula, route)
    universals = set(formula.universals)
    for index, clause in enumerate(formula.matrix):
        if len(clause) == 1:
            var = clause.literals[0].var
            raise ReductionError(f"clause {index} has a single atom over variable {var}", route=route, variable=var)
        listed = [lit.var for lit in clause.literals]
        for var in listed:
            if var in universals and listed.count(var) > 1:
                raise ReductionError(
                    f"universal variable {var} repeats in clause {index}", route=route, variable=var
                )
    alloc = alloc or VariableAllocator.after(formula)
    trace: list[TraceStep] = []

    counts = appearance_counts(formula)
    dropped = [w for w in formula.existentials if sum(counts[w]) == 0]
    padded = [w for w in formula.existentials if sum(counts[w]) == 1]
    if dropped:
        logger.warning("Dropping existentials without appearances: %s", dropped)
    matrix0 = list(formula.matrix) + [Clause((Literal(w), Literal(w, True))) for w in padded]
    trace.append(TraceStep("pad", "add (w ∨ ¬w) for single-appearance existentials", len(padded), 0))

    kept = [w for w in formula.existentials if w not in dropped]
    plans = plan_splits(matrix0, kept)
    copies: dict[int, list[int]] = {}
    replacements: dict[Position, Atom] = {}
    for w in kept:
        plan = plans[w]
        copies[w] = alloc.fresh_many(plan.a, f"w[{w}]")
        for position, copy in zip(plan.positions, copies[w], strict=True):
            atom = matrix0[position[0]].atoms[position[1]]
            assert isinstance(atom, Literal)
            replacements[position] = Literal(copy, atom.negated)
    matrix1 = replace_atoms(matrix0, replacements)
    total_copies = sum(len(c) for c in copies.values())
    trace.append(TraceStep("split", "one copy per existential appearance", 0, total_copies - len(kept)))

    matrix2: list[Clause] = []
    for clause in matrix1:
        matrix2.extend((clause, complement_clause(clause)))
    trace.append(TraceStep("complement", "pair each clause with its complement", len(matrix1), 0))

    chain: list[Clause] = []
    for w in kept:
        ring = copies[w]
        for k, copy in enumerate(ring):
            chain.append(Clause((Literal(copy, True), Literal(ring[(k + 1) % len(ring)]))))
    matrix3 = matrix2 + chain
    trace.append(TraceStep("chain", "cyclic implications over copies", len(chain), 0))

    matrix4: list[Clause] = []
    enforcers: list[tuple[int, GadgetInstance]] = []
    for clause in matrix3:
        if len(clause) != 2:
            matrix4.append(clause)
            continue
        enforcer = alloc.fresh("E-enforcer")
        gadget = build_E(enforcer, alloc)
        matrix4.append(Clause(clause.atoms + (Literal(enforcer, True),)))
        matrix4.extend(gadget.clauses)
        enforcers.append((enforcer, gadget))
    trace.append(
        TraceStep("enforce", "patch 2-clauses with ¬u ∧ E(u)", len(matrix4) - len(matrix3), 19 * len(enforcers))
    )

    existentials = [c for w in kept for c in copies[w]]
    for enforcer, gadget in enforcers:
        existentials.append(enforcer)
        existentials.extend(gadget.fresh_existentials)
    target = QuantifiedFormula(
        universals=formula.universals,
        existentials=tuple(existentials),
        matrix=tuple(matrix4),
        semantics=Semantics.SAT,
    )
    logger.debug(
        "Expanded %d clauses into %d (%d enforcers)", len(formula.matrix), len(matrix4), len(enforcers)
    )

    def forward(beta: Assignment, _: Assignment) -> dict[int, bool]:
        out = {x: beta[x] for x in formula.universals}
        for w in kept:
            for copy in copies[w]:
                out[copy] = beta[w]
        for enforcer, _gadget in enforcers:
            out[enforcer] = True
        out.update(complete_gadget_chain([g for _, g in enforcers], out))
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {x: beta[x] for x in formula.universals}
        out.update({w: beta[copies[w][0]] for w in kept})
        out.update(dict.fromkeys(dropped, False))
        return out

    def lift(sigma: Assignment) -> dict[int, bool]:
        return {x: sigma[x] for x in formula.universals}

    return ReductionResult(
        route=route,
        source=formula,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=tuple(trace),
        labels=_labels(alloc, existentials),
    )


def _append_balancers(
    formula: QuantifiedFormula,
    gadgets: Sequence[GadgetInstance],
    route: str,
    description: str,
) -> ReductionResult:
    target = QuantifiedFormula(
        universals=formula.universals + tuple(v for g in gadgets for v in g.fresh_universals),
        existentials=formula.existentials + tuple(v for g in gadgets for v in g.fresh_existentials),
        matrix=formula.matrix + tuple(c for g in gadgets for c in g.clauses),
        semantics=formula.semantics,
    )
    if len(target.universals) != len(target.existentials):
        raise ReductionError(
            f"balancing left {len(target.universals)} universals and {len(target.existentials)} existentials",
            route=route,
        )

    def forward(beta: Assignment, chosen: Assignment) -> dict[int, bool]:
        out = {var: beta[var] for var in formula.variables}
        for gadget in gadgets:
            values = {u: chosen.get(u, False) for u in gadget.fresh_universals}
            out.update(values)
            assert gadget.witness is not None
            out.update(gadget.witness(values))
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        return {var: beta[var] for var in formula.variables}

    def lift(sigma: Assignment) -> dict[int, bool]:
        out = {x: sigma[x] for x in formula.universals}
        out.update({u: False for g in gadgets for u in g.fresh_universals})
        return out

    added_vars = sum(len(g.fresh) for g in gadgets)
    return ReductionResult(
        route=route,
        source=formula,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(TraceStep(route, description, sum(len(g.clauses) for g in gadgets), added_vars),),
    )


def balance_q1(formula: QuantifiedFormula, alloc: VariableAllocator | None = None) -> ReductionResult:
    """Append p_e − p_u copies of Q¹; both blocks end with 5·p_e − 4·p_u variables."""
    route = "balance-q1"
    p_u, p_e = len(formula.universals), len(formula.existentials)
    if p_e < p_u:
        raise ReductionError(f"cannot balance: {p_u} universals exceed {p_e} existentials", route=route)
    alloc = alloc or VariableAllocator.after(formula)
    gadgets = [build_Q1(alloc) for _ in range(p_e - p_u)]
    result = _append_balancers(formula, gadgets, route, f"append {len(gadgets)} copies of Q1")
    if len(result.target.universals) != 5 * p_e - 4 * p_u:
        raise ReductionError("Q1 balancing produced an unexpected variable count", route=route)
    logger.debug("Balanced with %d Q1 copies to %d per block", len(gadgets), 5 * p_e - 4 * p_u)
    return result


def balance_q3(formula: QuantifiedFormula, alloc: VariableAllocator | None = None) -> ReductionResult:
    """Append Δ = (p_e − p_u)/3 copies of Q³.

    Raises:
        ReductionError: If p_e < p_u or 3 does not divide p_e − p_u.
    """
    route = "balance-q3"
    p_u, p_e = len(formula.universals), len(formula.existentials)
    if p_e < p_u:
        raise ReductionError(f"cannot balance: {p_u} universals exceed {p_e} existentials", route=route)
    if (p_e - p_u) % 3:
        raise ReductionError(f"p_e - p_u = {p_e - p_u} is not divisible by 3", route=route)
    alloc = alloc or VariableAllocator.after(formula)
    gadgets = [build_Q3(alloc) for _ in range((p_e - p_u) // 3)]
    return _append_balancers(formula, gadgets, route, f"append {len(gadgets)} copies of Q3")


def reduce_to_balanced_2222(
    formula: QuantifiedFormula, alloc: VariableAllocator | None = None
) -> ReductionResult | VerdictNo:
    """∀∃ NAE-3-SAT → balanced ∀∃ 3-SAT-(2,2,2,2).

    Normalizes degenerate clauses first and returns the VerdictNo unchanged
    when the source is trivially a no-instance.
    """
    normalized = normalize_degenerate_clauses(formula)
    if isinstance(normalized, VerdictNo):
        logger.info("Source is a no-instance before reduction: %s", normalized)
        return normalized
    alloc = alloc or VariableAllocator.after(formula)
    steps = [identity_result("normalize", formula, normalized)]
    steps.append(universalize_nae(normalized, alloc))
    steps.append(berman_expand(steps[-1].target, alloc))
    steps.append(balance_q1(steps[-1].target, alloc))
    return compose_all(steps, "nae-to-b2222")


# ----------------------------------------------------------------------
# (2,2,2,2) → (1,1,2,2)
# ----------------------------------------------------------------------


def balanced_2222_to_1122(formula: QuantifiedFormula, alloc: VariableAllocator | None = None) -> ReductionResult:
    """Balanced (2,2,2,2) → balanced (1,1,2,2).

    Each universal x becomes an existential tied to a fresh universal c by
    S_u(¬c, x, x) ∧ S_u(c, ¬x, ¬x); x is then split into four (1,1) copies
    chained through d-variables guarded by x² enforcers, and Q³ copies
    restore the balance.

    Raises:
        ClassViolationError: If the source is not balanced (2,2,2,2).
        ReductionError: If the universal count is not divisible by 3.
    """
    route = "b2222-to-b1122"
    require_class(formula, "b2222", route=route)
    p = len(formula.universals)
    if p % 3:
        raise ReductionError(f"universal count {p} is not divisible by 3", route=route)
    alloc = alloc or VariableAllocator.after(formula)

    cs = {x: alloc.fresh(f"c[{x}]") for x in formula.universals}
    ys: dict[int, list[int]] = {}
    ds: dict[int, list[int]] = {}
    for x in formula.universals:
        ys[x] = alloc.fresh_many(4, f"y[{x}]")
        ds[x] = alloc.fresh_many(2, f"d[{x}]")
    enforcers: dict[int, tuple[GadgetInstance, GadgetInstance]] = {}
    for x in formula.universals:
        X, C = Literal(x), Literal(cs[x])
        enforcers[x] = (
            build_S_universal(-C, X, X, alloc),
            build_S_universal(C, -X, -X, alloc),
        )
    squares: dict[int, tuple[GadgetInstance, GadgetInstance]] = {
        x: (build_x2(ds[x][0], alloc), build_x2(ds[x][1], alloc)) for x in formula.universals
    }

    matrix1 = list(formula.matrix)
    for x in formula.universals:
        for gadget in enforcers[x]:
            matrix1.extend(gadget.clauses)

    plans = plan_splits(matrix1, formula.universals)
    replacements: dict[Position, Atom] = {}
    for x in formula.universals:
        plan = plans[x]
        if plan.u != 4 or plan.n != 4:
            raise ReductionError(
                f"variable {x} appears ({plan.u},{plan.n}) after tying, expected (4,4)", route=route, variable=x
            )
        for k in range(4):
            replacements[plan.unnegated[k]] = Literal(ys[x][k])
            replacements[plan.negated[k]] = Literal(ys[x][k], True)
    matrix2 = replace_atoms(matrix1, replacements)

    for x in formula.universals:
        y1, y2, y3, y4 = (Literal(v) for v in ys[x])
        d1, d2 = (Literal(v) for v in ds[x])
        sq1, sq2 = squares[x]
        matrix2.append(Clause((-y1, y2, -d1)))
        matrix2.append(Clause((-y2, y3, -d1)))
        matrix2.extend(sq1.clauses)
        matrix2.append(Clause((-y3, y4, -d2)))
        matrix2.append(Clause((-y4, y1, -d2)))
        matrix2.extend(sq2.clauses)

    existentials = list(formula.existentials)
    for x in formula.universals:
        existentials.extend(ys[x] + ds[x])
    for x in formula.universals:
        existentials.extend(v for g in enforcers[x] for v in g.fresh_existentials)
    for x in formula.universals:
        existentials.extend(v for g in squares[x] for v in g.fresh_existentials)

    tied = QuantifiedFormula(
        universals=tuple(cs[x] for x in formula.universals),
        existentials=tuple(existentials),
        matrix=tuple(matrix2),
        semantics=Semantics.SAT,
    )
    if len(tied.existentials) != 27 * p or len(tied.universals) != p:
        raise ReductionError(
            f"expected {27 * p} existentials and {p} universals before balancing, got "
            f"{len(tied.existentials)} and {len(tied.universals)}",
            route=route,
        )

    def forward(beta: Assignment, _: Assignment) -> dict[int, bool]:
        out = {e: beta[e] for e in formula.existentials}
        for x in formula.universals:
            value = beta[x]
            out[cs[x]] = value
            out.update(dict.fromkeys(ys[x], value))
            out.update(dict.fromkeys(ds[x], True))
            for gadget in enforcers[x]:
                part = gadget.complete({cs[x]: value, x: value})
                if part is None:
                    raise ReductionError("S_u enforcer has no extension", route=route, variable=x)
                out.update(part)
            out.update(complete_gadget_chain(squares[x], out))
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {e: beta[e] for e in formula.existentials}
        out.update({x: beta[ys[x][0]] for x in formula.universals})
        return out

    def lift(sigma: Assignment) -> dict[int, bool]:
        return {cs[x]: sigma[x] for x in formula.universals}

    added = len(tied.matrix) - len(formula.matrix)
    tying = ReductionResult(
        route=route,
        source=formula,
        target=tied,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(
            TraceStep("tie", "S_u(¬c, y, y) ∧ S_u(c, ¬y, ¬y) per universal", 10 * p, 7 * p),
            TraceStep("split", "four (1,1) copies per former universal", 0, 3 * p),
            TraceStep("chain", "d-chain with x² enforcers", added - 10 * p, 16 * p),
        ),
        labels=_labels(alloc, tied.variables),
    )
    return compose_all([tying, balance_q3(tied, alloc)], route)


# ----------------------------------------------------------------------
# (1,1,2,2) → (1,1,2,1) / (1,1,1,2)
# ----------------------------------------------------------------------


def _parse_target_profile(target: AppearanceProfile | str | tuple[int, int]) -> tuple[int, int]:
    if isinstance(target, AppearanceProfile):
        pair = target.existential
    elif isinstance(target, tuple):
        pair = target
    else:
        digits = "".join(ch for ch in target if ch.isdigit())
        pair = (int(digits[-2]), int(digits[-1])) if len(digits) >= 2 else (0, 0)
    if pair not in ((2, 1), (1, 2)):
        raise ReductionError(f"existential target must be (2,1) or (1,2), got {pair}", route="b1122-to-112x")
    return pair


def balanced_1122_to_112x(
    formula: QuantifiedFormula,
    target: AppearanceProfile | str | tuple[int, int] = (2, 1),
    alloc: VariableAllocator | None = None,
) -> ReductionResult:
    """Balanced (1,1,2,2) → ∀∃ 3-SAT-(1,1,2,1) or (1,1,1,2).

    Each existential y is split into y1..y4 (first two unnegated
    appearances, then the two negated ones) and closed into a cycle
    y1 → y2 → y3 → y4 → y1 whose links are guarded by ¬d and E∀(d).
    Copies 3, 4 are then flipped for (2,1); copies 1, 2 and the d
    variables for (1,2).
    """
    pair = _parse_target_profile(target)
    route = f"b1122-to-11{pair[0]}{pair[1]}"
    require_class(formula, "b1122", route=route)
    alloc = alloc or VariableAllocator.after(formula)

    ys = {y: alloc.fresh_many(4, f"y[{y}]") for y in formula.existentials}
    ds = {y: alloc.fresh_many(4, f"d[{y}]") for y in formula.existentials}
    guards = {y: [build_E_forall(d, alloc) for d in ds[y]] for y in formula.existentials}

    plans = plan_splits(formula.matrix, formula.existentials)
    replacements: dict[Position, Atom] = {}
    for y in formula.existentials:
        plan = plans[y]
        if plan.u != 2 or plan.n != 2:
            raise ReductionError(f"variable {y} appears ({plan.u},{plan.n})", route=route, variable=y)
        y1, y2, y3, y4 = ys[y]
        replacements[plan.unnegated[0]] = Literal(y1)
        replacements[plan.unnegated[1]] = Literal(y2)
        replacements[plan.negated[0]] = Literal(y3, True)
        replacements[plan.negated[1]] = Literal(y4, True)
    matrix = replace_atoms(formula.matrix, replacements)

    for y in formula.existentials:
        ring = ys[y]
        for k in range(4):
            link = Clause((Literal(ring[k], True), Literal(ring[(k + 1) % 4]), Literal(ds[y][k], True)))
            matrix.append(link)
            matrix.extend(guards[y][k].clauses)

    flip_positions = (0, 1) if pair == (1, 2) else (2, 3)
    flipped: set[int] = {ys[y][k] for y in formula.existentials for k in flip_positions}
    if pair == (1, 2):
        flipped.update(d for y in formula.existentials for d in ds[y])
    mapping: dict[int, Atom] = {v: Literal(v, True) for v in flipped}
    matrix = [substitute_clause(clause, mapping) for clause in matrix]

    result_target = QuantifiedFormula(
        universals=formula.universals + tuple(v for y in formula.existentials for g in guards[y] for v in g.fresh),
        existentials=tuple(v for y in formula.existentials for v in ys[y])
        + tuple(d for y in formula.existentials for d in ds[y]),
        matrix=tuple(matrix),
        semantics=Semantics.SAT,
    )

    def forward(beta: Assignment, chosen: Assignment) -> dict[int, bool]:
        out = {x: beta[x] for x in formula.universals}
        for y in formula.existentials:
            for copy in ys[y]:
                out[copy] = beta[y] != (copy in flipped)
            for d, guard in zip(ds[y], guards[y], strict=True):
                out[d] = d not in flipped
                out.update({u: chosen.get(u, False) for u in guard.fresh_universals})
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {x: beta[x] for x in formula.universals}
        for y in formula.existentials:
            first = ys[y][0]
            out[y] = beta[first] != (first in flipped)
        return out

    def lift(sigma: Assignment) -> dict[int, bool]:
        out = {x: sigma[x] for x in formula.universals}
        out.update({u: False for y in formula.existentials for g in guards[y] for u in g.fresh_universals})
        return out

    n_e = len(formula.existentials)
    return ReductionResult(
        route=route,
        source=formula,
        target=result_target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(
            TraceStep("split", "four copies per existential", 0, 3 * n_e),
            TraceStep("chain", "E∀-guarded implication cycle", 12 * n_e, 12 * n_e),
            TraceStep("flip", f"negate copies {[k + 1 for k in flip_positions]}", 0, 0),
        ),
        labels=_labels(alloc, result_target.variables),
    )
