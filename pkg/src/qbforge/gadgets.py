"""Enforcer constructors with machine-checkable extension contracts.

Each builder takes its interface literals/variables as parameters and draws
fresh variables from a ``VariableAllocator`` in a fixed, documented order.
Clause lists are written out exactly; nothing is derived at runtime.

Usage:
    from qbforge.formula import VariableAllocator
    from qbforge.gadgets import build_EQ, verify_contract

    alloc = VariableAllocator(start=3)
    gadget = build_EQ(1, 2, alloc)
    assert verify_contract(gadget).passed
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Union

from qbforge.exceptions import NotFoundError
from qbforge.formula import (
    Assignment,
    Clause,
    Literal,
    QuantifiedFormula,
    Semantics,
    VariableAllocator,
    evaluate_matrix,
)
from qbforge.oracle import Budget, decide_matrix, resolve_budget
from qbforge.search import EvaluationCounter, SearchEngine, UniversalSearch, compile_matrix
from qbforge.utils import lexicographic_assignments

logger = logging.getLogger(__name__)

LiteralLike = Union[int, Literal]
WitnessRule = Callable[[Assignment], dict[int, bool]]


def _lit(value: LiteralLike) -> Literal:
    return value if isinstance(value, Literal) else Literal.from_int(value)


def _var(value: LiteralLike) -> int:
    return _lit(value).var


@dataclass(frozen=True)
class ExtensionContract:
    """Claim: an assignment of ``over`` extends iff ``predicate`` holds.

    ``over`` defaults to the gadget interface. Fresh universals not listed
    in ``over`` are treated as ∀-quantified when checking an extension.
    """

    semantics: Semantics
    predicate: Callable[[Assignment], bool]
    description: str
    over: tuple[int, ...] | None = None


@dataclass(frozen=True)
class GadgetInstance:
    """A gadget's clauses, fresh variables, interface and contract."""

    name: str
    clauses: tuple[Clause, ...]
    fresh_existentials: tuple[int, ...]
    fresh_universals: tuple[int, ...]
    interface: tuple[int, ...]
    contract: ExtensionContract
    roles: dict[str, int] = field(default_factory=dict)
    witness: WitnessRule | None = None
    universal_compatible: frozenset[int] = frozenset()

    @property
    def semantics(self) -> Semantics:
        return self.contract.semantics

    @property
    def contract_variables(self) -> tuple[int, ...]:
        return self.contract.over if self.contract.over is not None else self.interface

    @property
    def fresh(self) -> tuple[int, ...]:
        return self.fresh_universals + self.fresh_existentials

    def as_formula(self) -> QuantifiedFormula:
        """The gadget as a standalone formula; interface variables are existential."""
        return QuantifiedFormula(
            universals=self.fresh_universals,
            existentials=self.interface + self.fresh_existentials,
            matrix=self.clauses,
            semantics=self.semantics,
        )

    def complete(self, partial: Assignment, budget: Budget | int | None = None) -> dict[int, bool] | None:
        """Extend ``partial`` (interface and fresh universals) to the fresh existentials.

        Uses the constructive witness rule when it applies, otherwise a
        search confined to this gadget. Returns None when no extension exists.
        """
        known = {var: partial[var] for var in self.interface + self.fresh_universals if var in partial}
        if self.witness is not None and len(known) == len(self.interface) + len(self.fresh_universals):
            candidate = self.witness(known)
            if evaluate_matrix(self.clauses, {**known, **candidate}, self.semantics):
                return candidate
        verdict = decide_matrix(
            self.clauses, self.semantics, budget, fixed=known, variables=self.fresh_existentials
        )
        return verdict.witness if verdict.is_yes else None


@dataclass(frozen=True)
class ContractMismatch:
    assignment: dict[int, bool]
    expected: bool
    actual: bool


@dataclass(frozen=True)
class ContractReport:
    gadget: str
    cases: int
    passed: bool
    mismatch: ContractMismatch | None = None

    def to_dict(self) -> dict[str, Any]:
        mismatch = None
        if self.mismatch is not None:
            mismatch = {
                "assignment": [v if b else -v for v, b in self.mismatch.assignment.items()],
                "expected": self.mismatch.expected,
                "actual": self.mismatch.actual,
            }
        return {"gadget": self.gadget, "cases": self.cases, "passed": self.passed, "mismatch": mismatch}


# ----------------------------------------------------------------------
# S-enforcer family
# ----------------------------------------------------------------------


def _s_clauses(l1: Literal, l2: Literal, l3: Literal, a: int, b: int, c: int) -> list[Clause]:
    A, B, C = Literal(a), Literal(b), Literal(c)
    return [
        Clause((l1, -A, B)),
        Clause((l2, -B, C)),
        Clause((l3, A, -C)),
        Clause((A, B, C)),
        Clause((-A, -B, -C)),
    ]


def _some_true(*lits: Literal) -> Callable[[Assignment], bool]:
    return lambda beta: any(lit.evaluate(beta) for lit in lits)


def build_S(l1: LiteralLike, l2: LiteralLike, l3: LiteralLike, alloc: VariableAllocator) -> GadgetInstance:
    """S(ℓ1, ℓ2, ℓ3): satisfiable extension iff some ℓi is true. Allocates a, b, c."""
    lits = (_lit(l1), _lit(l2), _lit(l3))
    a, b, c = alloc.fresh("S.a"), alloc.fresh("S.b"), alloc.fresh("S.c")
    return GadgetInstance(
        name="S",
        clauses=tuple(_s_clauses(*lits, a, b, c)),
        fresh_existentials=(a, b, c),
        fresh_universals=(),
        interface=tuple(dict.fromkeys(lit.var for lit in lits)),
        contract=ExtensionContract(Semantics.SAT, _some_true(*lits), "some interface literal is true"),
        roles={"a": a, "b": b, "c": c},
    )


def build_S_universal(
    l1: LiteralLike, l2: LiteralLike, l3: LiteralLike, alloc: VariableAllocator
) -> GadgetInstance:
    """S_u: the S-enforcer whose first literal may be over a universal variable."""
    gadget = build_S(l1, l2, l3, alloc)
    return GadgetInstance(
        name="S_u",
        clauses=gadget.clauses,
        fresh_existentials=gadget.fresh_existentials,
        fresh_universals=(),
        interface=gadget.interface,
        contract=gadget.contract,
        roles=gadget.roles,
        universal_compatible=frozenset({_var(l1)}),
    )


def _merge(name: str, parts: Sequence[GadgetInstance], interface: tuple[int, ...], **kwargs: Any) -> GadgetInstance:
    clauses = tuple(c for part in parts for c in part.clauses)
    existentials = tuple(v for part in parts for v in part.fresh_existentials)
    universals = tuple(v for part in parts for v in part.fresh_universals)
    return GadgetInstance(
        name=name,
        clauses=clauses,
        fresh_existentials=existentials,
        fresh_universals=universals,
        interface=interface,
        **kwargs,
    )


def build_x2(x: int, alloc: VariableAllocator) -> GadgetInstance:
    """x² = S(x, y, y) ∧ S(x, ¬y, ¬y): extends iff x = T. Allocates y, then 6 internals."""
    X = Literal(x)
    y = alloc.fresh("x2.y")
    Y = Literal(y)
    parts = [build_S(X, Y, Y, alloc), build_S(X, -Y, -Y, alloc)]
    gadget = _merge(
        "x2",
        parts,
        (x,),
        contract=ExtensionContract(Semantics.SAT, _some_true(X), "x is true"),
        roles={"x": x, "y": y},
    )
    return _with_leading_existential(gadget, y)


def _with_leading_existential(gadget: GadgetInstance, *leading: int) -> GadgetInstance:
    return GadgetInstance(
        name=gadget.name,
        clauses=gadget.clauses,
        fresh_existentials=leading + gadget.fresh_existentials,
        fresh_universals=gadget.fresh_universals,
        interface=gadget.interface,
        contract=gadget.contract,
        roles=gadget.roles,
        witness=gadget.witness,
    )


def build_E(x: int, alloc: VariableAllocator) -> GadgetInstance:
    """E(x): extends iff x = T; x appears (2,1). Allocates u, y, z, then 15 internals."""
    X = Literal(x)
    u, y, z = alloc.fresh("E.u"), alloc.fresh("E.y"), alloc.fresh("E.z")
    U, Y, Z = Literal(u), Literal(y), Literal(z)
    parts = [
        build_S(X, Y, Y, alloc),
        build_S(X, -Y, -Y, alloc),
        build_S(-X, Z, -Z, alloc),
        build_S(Z, -Z, U, alloc),
        build_S(U, -U, -U, alloc),
    ]
    gadget = _merge(
        "E",
        parts,
        (x,),
        contract=ExtensionContract(Semantics.SAT, _some_true(X), "x is true"),
        roles={"x": x, "u": u, "y": y, "z": z},
    )
    return _with_leading_existential(gadget, u, y, z)


# ----------------------------------------------------------------------
# Balancing gadgets
# ----------------------------------------------------------------------


def _always(_: Assignment) -> bool:
    return True


def build_Q1(alloc: VariableAllocator) -> GadgetInstance:
    """Q¹: ∀u v w q r ∃a b c d, a yes-instance; every variable appears (2,2)."""
    u, v, w, q, r = (alloc.fresh(f"Q1.{n}") for n in "uvwqr")
    a, b, c, d = (alloc.fresh(f"Q1.{n}") for n in "abcd")
    U, V, W, Q, R = (Literal(n) for n in (u, v, w, q, r))
    A, B, C, D = (Literal(n) for n in (a, b, c, d))
    clauses = (
        Clause((U, V, A)),
        Clause((U, V, B)),
        Clause((-U, -V, -A)),
        Clause((-U, -V, -B)),
        Clause((A, -B, R)),
        Clause((-A, B, R)),
        Clause((C, -D, -R)),
        Clause((-C, D, -R)),
        Clause((W, Q, C)),
        Clause((W, Q, D)),
        Clause((-W, -Q, -C)),
        Clause((-W, -Q, -D)),
    )

    def rule(beta: Assignment) -> dict[int, bool]:
        return {a: not beta[u], b: not beta[u], c: not beta[w], d: not beta[w]}

    universals = (u, v, w, q, r)
    return GadgetInstance(
        name="Q1",
        clauses=clauses,
        fresh_existentials=(a, b, c, d),
        fresh_universals=universals,
        interface=(),
        contract=ExtensionContract(Semantics.SAT, _always, "every universal assignment extends", over=universals),
        roles=dict(zip("uvwqrabcd", universals + (a, b, c, d), strict=True)),
        witness=rule,
    )


def build_Q3(alloc: VariableAllocator) -> GadgetInstance:
    """Q³: ∀u v w q r ∃a b, a yes-instance; universals (1,1), existentials (2,2)."""
    u, v, w, q, r = (alloc.fresh(f"Q3.{n}") for n in "uvwqr")
    a, b = alloc.fresh("Q3.a"), alloc.fresh("Q3.b")
    U, V, W, Q, R = (Literal(n) for n in (u, v, w, q, r))
    A, B = Literal(a), Literal(b)
    clauses = (
        Clause((U, R, A)),
        Clause((-U, -B, -A)),
        Clause((V, Q, B)),
        Clause((-V, -R, -A)),
        Clause((W, A, B)),
        Clause((-W, -Q, -B)),
    )

    def rule(beta: Assignment) -> dict[int, bool]:
        return {a: not beta[u] and not beta[r], b: not beta[w] or not beta[q]}

    universals = (u, v, w, q, r)
    return GadgetInstance(
        name="Q3",
        clauses=clauses,
        fresh_existentials=(a, b),
        fresh_universals=universals,
        interface=(),
        contract=ExtensionContract(Semantics.SAT, _always, "every universal assignment extends", over=universals),
        roles=dict(zip("uvwqrab", universals + (a, b), strict=True)),
        witness=rule,
    )


def build_E_forall(d: int, alloc: VariableAllocator) -> GadgetInstance:
    """E∀(d) = (d ∨ u ∨ v)(d ∨ ¬u ∨ ¬v) with fresh universals u, v.

    d = T satisfies both clauses; when u = v, d must be T.
    """
    u, v = alloc.fresh("Eforall.u"), alloc.fresh("Eforall.v")
    D, U, V = Literal(d), Literal(u), Literal(v)
    return GadgetInstance(
        name="E_forall",
        clauses=(Clause((D, U, V)), Clause((D, -U, -V))),
        fresh_existentials=(),
        fresh_universals=(u, v),
        interface=(d,),
        contract=ExtensionContract(
            Semantics.SAT,
            lambda beta: beta[d] or beta[u] != beta[v],
            "d is true or u differs from v",
            over=(d, u, v),
        ),
        roles={"d": d, "u": u, "v": v},
    )


# ----------------------------------------------------------------------
# NAE gadgets
# ----------------------------------------------------------------------


def _mono(*vars_: int) -> Clause:
    return Clause(tuple(Literal(v) for v in vars_))


def build_NE_aux(x: int, y: int, alloc: VariableAllocator) -> GadgetInstance:
    """NE_aux(x, y): nae-extends iff x ≠ y. Allocates a, b, u, v, w."""
    a, b, u, v, w = (alloc.fresh(f"NE_aux.{n}") for n in "abuvw")
    return GadgetInstance(
        name="NE_aux",
        clauses=(
            _mono(x, y, a),
            _mono(x, y, b),
            _mono(a, b, u),
            _mono(a, b, v),
            _mono(a, b, w),
            _mono(u, v, w),
        ),
        fresh_existentials=(a, b, u, v, w),
        fresh_universals=(),
        interface=(x, y),
        contract=ExtensionContract(Semantics.NAE, lambda beta: beta[x] != beta[y], "x differs from y"),
        roles={"a": a, "b": b, "u": u, "v": v, "w": w},
    )


def build_EQ(x: int, y: int, alloc: VariableAllocator) -> GadgetInstance:
    """EQ(x, y): nae-extends iff x = y. Allocates p, q, r, then two NE_aux copies."""
    p, q, r = alloc.fresh("EQ.p"), alloc.fresh("EQ.q"), alloc.fresh("EQ.r")
    first, second = build_NE_aux(p, q, alloc), build_NE_aux(p, r, alloc)
    return GadgetInstance(
        name="EQ",
        clauses=first.clauses + second.clauses + (_mono(x, q, r), _mono(y, q, r)),
        fresh_existentials=(p, q, r) + first.fresh_existentials + second.fresh_existentials,
        fresh_universals=(),
        interface=(x, y),
        contract=ExtensionContract(Semantics.NAE, lambda beta: beta[x] == beta[y], "x equals y"),
        roles={"p": p, "q": q, "r": r},
    )


def build_NE(x: int, y: int, alloc: VariableAllocator) -> GadgetInstance:
    """NE(x, y): nae-extends iff x ≠ y, with x and y each used once. Allocates p, q first."""
    p, q = alloc.fresh("NE.p"), alloc.fresh("NE.q")
    parts = [build_EQ(x, p, alloc), build_EQ(y, q, alloc), build_NE_aux(p, q, alloc)]
    return GadgetInstance(
        name="NE",
        clauses=tuple(c for part in parts for c in part.clauses),
        fresh_existentials=(p, q) + tuple(v for part in parts for v in part.fresh_existentials),
        fresh_universals=(),
        interface=(x, y),
        contract=ExtensionContract(Semantics.NAE, lambda beta: beta[x] != beta[y], "x differs from y"),
        roles={"p": p, "q": q},
    )


def build_P1(x: int, alloc: VariableAllocator) -> GadgetInstance:
    """P1(x): pads x by one appearance; both values of x nae-extend."""
    a, b, c, d, e = (alloc.fresh(f"P1.{n}") for n in "abcde")

    def rule(_: Assignment) -> dict[int, bool]:
        return {a: True, b: False, c: True, d: False, e: True}

    return GadgetInstance(
        name="P1",
        clauses=(
            _mono(x, a, b),
            _mono(a, c, d),
            _mono(a, b, e),
            _mono(a, d, e),
            _mono(b, c, d),
            _mono(b, c, e),
            _mono(c, d, e),
        ),
        fresh_existentials=(a, b, c, d, e),
        fresh_universals=(),
        interface=(x,),
        contract=ExtensionContract(Semantics.NAE, _always, "every value of x extends"),
        roles={"a": a, "b": b, "c": c, "d": d, "e": e},
        witness=rule,
    )


# ----------------------------------------------------------------------
# Catalog and verification
# ----------------------------------------------------------------------


GadgetFactory = Callable[[VariableAllocator], GadgetInstance]


def _interface(alloc: VariableAllocator, count: int) -> list[int]:
    return alloc.fresh_many(count, "interface")


GADGET_CATALOG: dict[str, GadgetFactory] = {
    "S": lambda alloc: build_S(*_interface(alloc, 3), alloc),
    "S_u": lambda alloc: build_S_universal(*_interface(alloc, 3), alloc),
    "x2": lambda alloc: build_x2(*_interface(alloc, 1), alloc),
    "E": lambda alloc: build_E(*_interface(alloc, 1), alloc),
    "E_forall": lambda alloc: build_E_forall(*_interface(alloc, 1), alloc),
    "Q1": build_Q1,
    "Q3": build_Q3,
    "NE_aux": lambda alloc: build_NE_aux(*_interface(alloc, 2), alloc),
    "EQ": lambda alloc: build_EQ(*_interface(alloc, 2), alloc),
    "NE": lambda alloc: build_NE(*_interface(alloc, 2), alloc),
    "P1": lambda alloc: build_P1(*_interface(alloc, 1), alloc),
}


def build_gadget(name: str, alloc: VariableAllocator | None = None) -> GadgetInstance:
    """Instantiate a catalog gadget with fresh interface variables.

    Raises:
        NotFoundError: If ``name`` is not in the catalog.
    """
    try:
        factory = GADGET_CATALOG[name]
    except KeyError:
        raise NotFoundError("gadget", name) from None
    return factory(alloc or VariableAllocator())


def verify_contract(gadget: GadgetInstance, budget: Budget | int | None = None) -> ContractReport:
    """Check the declared contract against exhaustive search.

    For every assignment of the contract variables (lexicographic order),
    decides whether the fresh existentials extend it, with remaining fresh
    universals ∀-quantified, and compares with the predicate.

    Raises:
        BudgetExceededError: If the search exceeds the budget.
    """
    limits = resolve_budget(budget)
    counter = EvaluationCounter(limits.max_evaluations)
    engine = SearchEngine(counter)
    search = UniversalSearch(engine, limits.enumeration_limit, limits.candidate_window)

    over = gadget.contract_variables
    quantified = [v for v in gadget.fresh_universals if v not in over]
    cases = 0
    for assignment in lexicographic_assignments(over):
        cases += 1
        expected = bool(gadget.contract.predicate(assignment))
        constraints = compile_matrix(gadget.clauses, gadget.semantics, fixed=assignment)
        if quantified:
            actual = search.least_failing(constraints, quantified) is None
        else:
            actual = engine.solve(constraints) is not None
        if actual != expected:
            logger.warning("Gadget %s violates its contract at %s", gadget.name, assignment)
            return ContractReport(gadget.name, cases, False, ContractMismatch(assignment, expected, actual))

    logger.debug("Gadget %s passed %d contract cases", gadget.name, cases)
    return ContractReport(gadget.name, cases, True)


def verify_catalog(
    names: Sequence[str] | None = None, budget: Budget | int | None = None
) -> list[ContractReport]:
    """Verify every (or each named) catalog gadget."""
    return [verify_contract(build_gadget(name), budget) for name in (names or list(GADGET_CATALOG))]


def complete_gadgets(
    gadgets: Sequence[GadgetInstance], assignment: Mapping[int, bool], budget: Budget | int | None = None
) -> dict[int, bool] | None:
    """Fill in the fresh existentials of each gadget in turn; None if one cannot extend."""
    filled: dict[int, bool] = {}
    for gadget in gadgets:
        known = {**assignment, **filled}
        part = gadget.complete(known, budget) if budget is not None else complete_by_template(gadget, known)
        if part is None:
            return None
        filled.update(part)
    return filled


@functools.cache
def _template_arity(name: str) -> int:
    return len(build_gadget(name).interface)


@functools.cache
def _template_completion(name: str, values: tuple[bool, ...]) -> tuple[bool, ...] | None:
    template = build_gadget(name)
    done = template.complete(dict(zip(template.interface, values, strict=True)))
    if done is None:
        return None
    return tuple(done[var] for var in template.fresh_existentials)


def complete_by_template(gadget: GadgetInstance, assignment: Mapping[int, bool]) -> dict[int, bool] | None:
    """Complete a catalog-shaped gadget by reusing one solved copy.

    Copies built by the same constructor differ only by renaming, so the
    completion found for a template is mapped over by position. Gadgets
    whose shape differs from the catalog copy (repeated interface variables,
    fresh universals) fall back to ``complete``.
    """
    template_interface = _template_arity(gadget.name) if gadget.name in GADGET_CATALOG else -1
    if gadget.fresh_universals or len(gadget.interface) != template_interface:
        return gadget.complete(assignment)
    values = tuple(assignment[var] for var in gadget.interface)
    solved = _template_completion(gadget.name, values)
    if solved is None:
        return None
    return dict(zip(gadget.fresh_existentials, solved, strict=True))
