"""Monotone NAE reductions: ∀∃ NAE-3-SAT → monotone (1,4) → monotone linear (1,3).

Negated appearances disappear by routing every appearance of a variable
through its own unnegated copy; EQ chains keep same-polarity copies equal
and one NE gadget separates the two polarity groups.
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
)
from qbforge.gadgets import GadgetInstance, build_EQ, build_NE, build_P1
from qbforge.normalize import VerdictNo, normalize_degenerate_clauses
from qbforge.reductions import (
    Position,
    ReductionResult,
    TraceStep,
    complete_gadget_chain,
    compose,
    identity_result,
    plan_splits,
    replace_atoms,
    require_constant_free,
    require_semantics,
)
from qbforge.validation import require_class

logger = logging.getLogger(__name__)

TARGET_APPEARANCES = 4


def pad_two_clauses(formula: QuantifiedFormula) -> QuantifiedFormula:
    """Rewrite every (a ∨ b) as (a ∨ a ∨ b), which is nae-satisfied exactly when a ≠ b."""
    matrix = [Clause((c.atoms[0],) + c.atoms) if len(c) == 2 else c for c in formula.matrix]
    return formula.with_matrix(matrix)


def nae_to_monotone_14(
    formula: QuantifiedFormula, alloc: VariableAllocator | None = None
) -> ReductionResult | VerdictNo:
    """∀∃ NAE-3-SAT → monotone ∀∃ NAE-3-SAT-(1,4), one universal per clause at most.

    Every universal x is replaced by an existential tied to a fresh universal
    z through EQ(z, ·). Appearances are split into unnegated copies (negated
    appearances stand for ¬v), then every existential is padded to exactly
    four appearances with P1 gadgets.
    """
    route = "nae-to-mono14"
    require_semantics(formula, Semantics.NAE, route)
    require_constant_free(formula, route)
    normalized = normalize_degenerate_clauses(formula)
    if isinstance(normalized, VerdictNo):
        logger.info("Source is a no-instance before reduction: %s", normalized)
        return normalized
    padded = pad_two_clauses(normalized)
    for index, clause in enumerate(padded.matrix):
        if len(clause) != 3 or len(clause.variables) < 2:
            raise ReductionError(f"clause {index} has more than one duplicate literal", route=route)
    alloc = alloc or VariableAllocator.after(formula)

    zs = {x: alloc.fresh(f"z[{x}]") for x in formula.universals}
    plans = plan_splits(padded.matrix, padded.variables)
    # a universal gains one more unnegated appearance, inside EQ(z, ·)
    unnegated = {v: plans[v].u + (1 if v in zs else 0) for v in padded.variables}
    total = {v: plans[v].a + (1 if v in zs else 0) for v in padded.variables}
    kept = [v for v in padded.variables if total[v] > 0]
    dropped = [v for v in padded.existentials if total[v] == 0]
    if dropped:
        logger.warning("Dropping existentials without appearances: %s", dropped)

    copies = {v: alloc.fresh_many(total[v], f"copy[{v}]") for v in kept}
    replacements: dict[Position, Literal] = {}
    for v in kept:
        plan = plans[v]
        for k, position in enumerate(plan.unnegated):
            replacements[position] = Literal(copies[v][k])
        offset = unnegated[v]
        for k, position in enumerate(plan.negated):
            replacements[position] = Literal(copies[v][offset + k])
    matrix = replace_atoms(padded.matrix, replacements)

    links: list[GadgetInstance] = []
    for x in formula.universals:
        links.append(build_EQ(zs[x], copies[x][unnegated[x] - 1], alloc))
    chains: list[GadgetInstance] = []
    separators: list[GadgetInstance] = []
    for v in kept:
        group_split = unnegated[v]
        ring = copies[v]
        for k in range(len(ring) - 1):
            if k + 1 != group_split:
                chains.append(build_EQ(ring[k], ring[k + 1], alloc))
        if 0 < group_split < len(ring):
            separators.append(build_NE(ring[group_split - 1], ring[group_split], alloc))
    for gadget in links + chains + separators:
        matrix.extend(gadget.clauses)

    existentials = [c for v in kept for c in copies[v]]
    existentials += [var for g in links + chains + separators for var in g.fresh_existentials]
    staged = QuantifiedFormula(
        universals=tuple(zs.values()), existentials=tuple(existentials), matrix=tuple(matrix), semantics=Semantics.NAE
    )
    counts = appearance_counts(staged)
    pads: list[GadgetInstance] = []
    for var in existentials:
        seen = sum(counts[var])
        if seen > TARGET_APPEARANCES:
            raise ReductionError(f"variable {var} appears {seen} times before padding", route=route, variable=var)
        pads.extend(build_P1(var, alloc) for _ in range(TARGET_APPEARANCES - seen))
    for gadget in pads:
        matrix.extend(gadget.clauses)
        existentials.extend(gadget.fresh_existentials)

    target = QuantifiedFormula(
        universals=tuple(zs.values()), existentials=tuple(existentials), matrix=tuple(matrix), semantics=Semantics.NAE
    )
    gadgets = links + chains + separators + pads

    def forward(beta: Assignment, _: Assignment) -> dict[int, bool]:
        out: dict[int, bool] = {}
        for x, z in zs.items():
            out[z] = beta[x]
        for v in kept:
            for k, copy in enumerate(copies[v]):
                out[copy] = beta[v] if k < unnegated[v] else not beta[v]
        out.update(complete_gadget_chain(gadgets, out))
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {x: beta[z] for x, z in zs.items()}
        for v in formula.existentials:
            if v in dropped:
                out[v] = False
            else:
                first = beta[copies[v][0]]
                out[v] = first if unnegated[v] > 0 else not first
        return out

    def lift(sigma: Assignment) -> dict[int, bool]:
        return {z: sigma[x] for x, z in zs.items()}

    gadget_clauses = sum(len(g.clauses) for g in links + chains + separators)
    core = ReductionResult(
        route=route,
        source=normalized,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(
            TraceStep("pad-2-clauses", "(a ∨ b) becomes (a ∨ a ∨ b)", 0, 0),
            TraceStep("split", "one unnegated copy per appearance", 0, sum(total[v] for v in kept)),
            TraceStep("link", "EQ chains, NE at the polarity boundary, EQ(z, ·) per universal", gadget_clauses, 0),
            TraceStep("pad", f"P1 copies up to {TARGET_APPEARANCES} appearances", 7 * len(pads), 5 * len(pads)),
        ),
        labels={var: alloc.labels.get(var, "") for var in target.variables},
    )
    return compose(identity_result("normalize", formula, normalized), core, route=route)


def monotone14_to_monotone13_linear(
    formula: QuantifiedFormula, alloc: VariableAllocator | None = None
) -> ReductionResult:
    """Monotone (1,4) → monotone linear (1,3).

    Each existential z gets eight copies z1..z8 and eight links e1..e8 on a
    cycle (z_k ∨ e_k ∨ u_k)(e_k ∨ z_{k+1} ∨ v_k) with fresh universals, plus
    the ties (z5 ∨ e1 ∨ e2)(z6 ∨ e7 ∨ e8)(z7 ∨ e3 ∨ e4)(z8 ∨ e5 ∨ e6). The
    four original appearances go to z1..z4.
    """
    route = "mono14-to-mono13"
    require_class(formula, "mono14", route=route)
    alloc = alloc or VariableAllocator.after(formula)

    zs: dict[int, list[int]] = {}
    es: dict[int, list[int]] = {}
    for z in formula.existentials:
        zs[z] = alloc.fresh_many(8, f"z[{z}]")
        es[z] = alloc.fresh_many(8, f"e[{z}]")
    us: dict[int, list[int]] = {}
    vs: dict[int, list[int]] = {}
    for z in formula.existentials:
        us[z] = alloc.fresh_many(8, f"u[{z}]")
        vs[z] = alloc.fresh_many(8, f"v[{z}]")

    plans = plan_splits(formula.matrix, formula.existentials)
    replacements = {
        position: Literal(zs[z][j]) for z in formula.existentials for j, position in enumerate(plans[z].positions)
    }
    matrix = replace_atoms(formula.matrix, replacements)

    def mono(*vars_: int) -> Clause:
        return Clause(tuple(Literal(v) for v in vars_))

    for z in formula.existentials:
        c, e, u, v = zs[z], es[z], us[z], vs[z]
        for k in range(8):
            matrix.append(mono(c[k], e[k], u[k]))
            matrix.append(mono(e[k], c[(k + 1) % 8], v[k]))
        matrix.append(mono(c[4], e[0], e[1]))
        matrix.append(mono(c[5], e[6], e[7]))
        matrix.append(mono(c[6], e[2], e[3]))
        matrix.append(mono(c[7], e[4], e[5]))

    target = QuantifiedFormula(
        universals=formula.universals + tuple(x for z in formula.existentials for x in us[z] + vs[z]),
        existentials=tuple(x for z in formula.existentials for x in zs[z] + es[z]),
        matrix=tuple(matrix),
        semantics=Semantics.NAE,
    )

    def forward(beta: Assignment, chosen: Assignment) -> dict[int, bool]:
        out = {x: beta[x] for x in formula.universals}
        for z in formula.existentials:
            out.update(dict.fromkeys(zs[z], beta[z]))
            out.update(dict.fromkeys(es[z], not beta[z]))
            out.update({u: chosen.get(u, False) for u in us[z]})
            out.update({v: chosen.get(v, True) for v in vs[z]})
        return out

    def backward(beta: Assignment) -> dict[int, bool]:
        out = {x: beta[x] for x in formula.universals}
        out.update({z: beta[zs[z][0]] for z in formula.existentials})
        return out

    def lift(sigma: Assignment) -> dict[int, bool]:
        out = {x: sigma[x] for x in formula.universals}
        for z in formula.existentials:
            out.update(dict.fromkeys(us[z], False))
            out.update(dict.fromkeys(vs[z], True))
        return out

    n = len(formula.existentials)
    logger.debug("Linearized %d existentials into %d clauses", n, len(matrix))
    return ReductionResult(
        route=route,
        source=formula,
        target=target,
        forward_map=forward,
        backward_map=backward,
        lift_map=lift,
        trace=(
            TraceStep("split", "eight copies and eight links per existential", 0, 15 * n),
            TraceStep("cycle", "16 cycle clauses with fresh universals", 16 * n, 16 * n),
            TraceStep("tie", "4 tie clauses", 4 * n, 0),
        ),
        labels={var: alloc.labels.get(var, "") for var in target.variables},
    )
