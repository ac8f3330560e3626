"""Clause and quantified-formula data model.

Variables are dense positive integers. A clause is an ordered tuple of at
most three atoms, each a ``Literal`` or a ``Constant``. Atom order is kept
through every transformation so that the "k-th appearance" of a variable
(clause index first, then atom index) is well defined.

Usage:
    from qbforge.formula import Clause, QuantifiedFormula, Semantics

    phi = QuantifiedFormula(
        universals=(1,),
        existentials=(2, 3),
        matrix=(Clause.of(1, -2, 3),),
        semantics=Semantics.NAE,
    )
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from qbforge.exceptions import AllocatorExhaustedError, ConflictError, FormulaError, NotFoundError

Assignment = Mapping[int, bool]

MAX_CLAUSE_LENGTH = 3


class Semantics(str, Enum):
    """Clause satisfaction semantics."""

    SAT = "sat"
    NAE = "nae"


class Constant(Enum):
    """Boolean constant atom, only legal in constants-allowed formulas."""

    TRUE = "T"
    FALSE = "F"

    @property
    def truth(self) -> bool:
        return self is Constant.TRUE

    @classmethod
    def of(cls, value: bool) -> Constant:
        return cls.TRUE if value else cls.FALSE

    def __neg__(self) -> Constant:
        return Constant.of(not self.truth)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True, order=True)
class Literal:
    """A variable or its negation."""

    var: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.var <= 0:
            raise FormulaError("variable ids must be positive", field="var", value=self.var)

    def __neg__(self) -> Literal:
        return Literal(self.var, not self.negated)

    def evaluate(self, assignment: Assignment) -> bool:
        try:
            value = assignment[self.var]
        except KeyError:
            raise FormulaError(f"assignment does not cover variable {self.var}", field="var", value=self.var) from None
        return value != self.negated

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    @classmethod
    def from_int(cls, value: int) -> Literal:
        if value == 0:
            raise FormulaError("0 is not a literal", field="literal", value=value)
        return cls(abs(value), value < 0)

    def __str__(self) -> str:
        return str(self.to_int())


Atom = Union[Literal, Constant]


def atom_value(atom: Atom, assignment: Assignment) -> bool:
    """Evaluate a single clause atom."""
    if isinstance(atom, Constant):
        return atom.truth
    return atom.evaluate(assignment)


def _coerce_atom(item: int | str | Literal | Constant) -> Atom:
    if isinstance(item, (Literal, Constant)):
        return item
    if isinstance(item, str):
        if item in ("T", "F"):
            return Constant(item)
        return Literal.from_int(int(item))
    return Literal.from_int(item)


@dataclass(frozen=True)
class Clause:
    """An ordered disjunction of one to three atoms."""

    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise FormulaError("clauses must contain at least one atom", field="atoms")
        if len(self.atoms) > MAX_CLAUSE_LENGTH:
            raise FormulaError(
                f"clauses hold at most {MAX_CLAUSE_LENGTH} atoms, got {len(self.atoms)}",
                field="atoms",
                value=len(self.atoms),
            )

    @classmethod
    def of(cls, *items: int | str | Literal | Constant) -> Clause:
        """Build a clause from signed ints, literals, constants or 'T'/'F'."""
        return cls(tuple(_coerce_atom(item) for item in items))

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    @property
    def literals(self) -> tuple[Literal, ...]:
        return tuple(a for a in self.atoms if isinstance(a, Literal))

    @property
    def constants(self) -> tuple[Constant, ...]:
        return tuple(a for a in self.atoms if isinstance(a, Constant))

    @property
    def variables(self) -> tuple[int, ...]:
        """Distinct variables in atom order."""
        return tuple(dict.fromkeys(lit.var for lit in self.literals))

    @property
    def has_distinct_variables(self) -> bool:
        lits = self.literals
        return len({lit.var for lit in lits}) == len(lits)

    @property
    def is_monotone(self) -> bool:
        return not any(lit.negated for lit in self.literals)

    def to_ints(self) -> tuple[int | str, ...]:
        return tuple(a.value if isinstance(a, Constant) else a.to_int() for a in self.atoms)

    def __str__(self) -> str:
        return "(" + " ".join(str(a) for a in self.atoms) + ")"


def complement_clause(clause: Clause) -> Clause:
    """Flip the polarity of every literal, keeping atom order.

    Raises:
        FormulaError: If the clause contains a constant.
    """
    if clause.constants:
        raise FormulaError("cannot complement a clause containing constants", field="clause", value=clause)
    return Clause(tuple(-lit for lit in clause.literals))


def evaluate_clause(clause: Clause, assignment: Assignment, semantics: Semantics) -> bool:
    """Evaluate one clause under SAT or NAE semantics.

    Raises:
        FormulaError: If the assignment misses a clause variable.
    """
    values = [atom_value(atom, assignment) for atom in clause.atoms]
    if semantics is Semantics.NAE:
        return any(values) and not all(values)
    return any(values)


def evaluate_matrix(matrix: Iterable[Clause], assignment: Assignment, semantics: Semantics) -> bool:
    return first_violated_clause(matrix, assignment, semantics) is None


def first_violated_clause(matrix: Iterable[Clause], assignment: Assignment, semantics: Semantics) -> int | None:
    """Index of the first clause the assignment fails, or None."""
    for index, clause in enumerate(matrix):
        if not evaluate_clause(clause, assignment, semantics):
            return index
    return None


@dataclass(frozen=True)
class AppearanceProfile:
    """Exact occurrence counts (s1, s2, t1, t2).

    s1/s2 are the unnegated/negated appearances of every universal, t1/t2
    those of every existential.
    """

    s1: int
    s2: int
    t1: int
    t2: int

    def __post_init__(self) -> None:
        if min(self.s1, self.s2, self.t1, self.t2) < 0:
            raise FormulaError("appearance counts must be non-negative", field="profile", value=self)

    @classmethod
    def parse(cls, text: str) -> AppearanceProfile:
        """Parse '1121' or '1,1,2,1'."""
        body = text.strip().strip("()")
        digits = [int(part) for part in (body.split(",") if "," in body else list(body))]
        if len(digits) != 4:
            raise FormulaError("an appearance profile has four counts", field="profile", value=text)
        return cls(*digits)

    @property
    def universal(self) -> tuple[int, int]:
        return (self.s1, self.s2)

    @property
    def existential(self) -> tuple[int, int]:
        return (self.t1, self.t2)

    def __str__(self) -> str:
        return f"({self.s1},{self.s2},{self.t1},{self.t2})"


@dataclass(frozen=True)
class QuantifiedFormula:
    """A two-block ∀∃ formula (either block may be empty).

    Invariants: blocks are disjoint, every matrix variable is declared, and
    constants only occur in constants-allowed formulas, which carry no
    universals.
    """

    universals: tuple[int, ...] = ()
    existentials: tuple[int, ...] = ()
    matrix: tuple[Clause, ...] = ()
    semantics: Semantics = Semantics.SAT
    constants_allowed: bool = False
    _declared: frozenset[int] = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "universals", tuple(self.universals))
        object.__setattr__(self, "existentials", tuple(self.existentials))
        object.__setattr__(self, "matrix", tuple(self.matrix))
        object.__setattr__(self, "semantics", Semantics(self.semantics))

        for name, block in (("universals", self.universals), ("existentials", self.existentials)):
            if len(set(block)) != len(block):
                duplicate = next(v for v in block if block.count(v) > 1)
                raise ConflictError(f"variable {duplicate} declared twice in {name}", existing_id=str(duplicate))
        overlap = set(self.universals) & set(self.existentials)
        if overlap:
            var = min(overlap)
            raise ConflictError(f"variable {var} is both universal and existential", existing_id=str(var))
        declared = frozenset(self.universals) | frozenset(self.existentials)
        object.__setattr__(self, "_declared", declared)

        if self.constants_allowed and self.universals:
            raise FormulaError("constants-allowed formulas cannot have universals", field="universals")
        for index, clause in enumerate(self.matrix):
            if clause.constants and not self.constants_allowed:
                raise FormulaError(f"clause {index} contains a constant", field="matrix", value=clause)
            for lit in clause.literals:
                if lit.var not in declared:
                    raise FormulaError(
                        f"clause {index} uses undeclared variable {lit.var}", field="matrix", value=lit.var
                    )

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    @property
    def variables(self) -> tuple[int, ...]:
        return self.universals + self.existentials

    @property
    def max_variable(self) -> int:
        return max(self.variables, default=0)

    @property
    def is_unquantified(self) -> bool:
        return not self.universals

    def is_universal(self, var: int) -> bool:
        if var not in self._declared:
            raise NotFoundError("variable", str(var))
        return var in self.universals

    def declares(self, var: int) -> bool:
        return var in self._declared

    def appearances(self, var: int) -> list[tuple[int, int, Literal]]:
        """Occurrences of ``var`` as (clause index, atom index, literal), in appearance order."""
        if var not in self._declared:
            raise NotFoundError("variable", str(var))
        return [
            (ci, ai, atom)
            for ci, clause in enumerate(self.matrix)
            for ai, atom in enumerate(clause.atoms)
            if isinstance(atom, Literal) and atom.var == var
        ]

    def with_matrix(self, matrix: Sequence[Clause], **changes: object) -> QuantifiedFormula:
        return dataclasses.replace(self, matrix=tuple(matrix), **changes)  # type: ignore[arg-type]

    def evaluate(self, assignment: Assignment) -> bool:
        return evaluate_matrix(self.matrix, assignment, self.semantics)

    def __str__(self) -> str:
        prefix = f"∀{list(self.universals)} ∃{list(self.existentials)}"
        return f"{prefix} {self.semantics.value}: " + " ∧ ".join(str(c) for c in self.matrix)


def appearance_counts(formula: QuantifiedFormula) -> dict[int, tuple[int, int]]:
    """(unnegated, negated) counts for every declared variable."""
    counts = {var: [0, 0] for var in formula.variables}
    for clause in formula.matrix:
        for lit in clause.literals:
            counts[lit.var][1 if lit.negated else 0] += 1
    return {var: (pos, neg) for var, (pos, neg) in counts.items()}


def count_appearances(formula: QuantifiedFormula, var: int) -> tuple[int, int]:
    """Return (unnegated, negated) appearances of ``var`` in the matrix.

    Raises:
        NotFoundError: If ``var`` is not declared in the prefix.
    """
    if not formula.declares(var):
        raise NotFoundError("variable", str(var))
    pos = neg = 0
    for clause in formula.matrix:
        for lit in clause.literals:
            if lit.var == var:
                if lit.negated:
                    neg += 1
                else:
                    pos += 1
    return pos, neg


Replacement = Union[int, Literal, Constant]


def _normalize_replacements(
    replacements: Mapping[int, Replacement] | Sequence[tuple[int, Replacement]],
) -> dict[int, Atom]:
    pairs = list(replacements.items()) if isinstance(replacements, Mapping) else list(replacements)
    mapping: dict[int, Atom] = {}
    for source, target in pairs:
        if source in mapping:
            raise ConflictError(f"variable {source} is replaced twice", existing_id=str(source))
        mapping[source] = Literal(target) if isinstance(target, int) else target
    return mapping


def substitute_clause(clause: Clause, mapping: Mapping[int, Atom]) -> Clause:
    atoms: list[Atom] = []
    for atom in clause.atoms:
        if isinstance(atom, Literal) and atom.var in mapping:
            target = mapping[atom.var]
            atoms.append(-target if atom.negated else target)
        else:
            atoms.append(atom)
    return Clause(tuple(atoms))


def substitute(
    formula: QuantifiedFormula,
    replacements: Mapping[int, Replacement] | Sequence[tuple[int, Replacement]],
) -> QuantifiedFormula:
    """Simultaneously replace variables by literals or constants.

    ``x -> y`` replaces x by y and ¬x by ¬y; ``x -> b`` for a constant b
    replaces x by b and ¬x by the complementary constant. A renamed
    variable takes its source's place in the prefix; variables replaced by
    constants leave the prefix and make the result constants-allowed.

    Raises:
        ConflictError: If a source variable is listed twice, or the
            renaming puts one variable in both blocks.
    """
    mapping = _normalize_replacements(replacements)
    if not mapping:
        return formula

    def rename(block: tuple[int, ...]) -> list[int]:
        out: list[int] = []
        for var in block:
            target = mapping.get(var)
            if isinstance(target, Constant):
                continue
            renamed = target.var if isinstance(target, Literal) else var
            if renamed not in out:
                out.append(renamed)
        return out

    universals = rename(formula.universals)
    existentials = rename(formula.existentials)
    both = set(universals) & set(existentials)
    if both:
        var = min(both)
        raise ConflictError(f"substitution places variable {var} in both blocks", existing_id=str(var))

    matrix = tuple(substitute_clause(clause, mapping) for clause in formula.matrix)
    uses_constants = any(isinstance(target, Constant) for target in mapping.values())
    return QuantifiedFormula(
        universals=tuple(universals),
        existentials=tuple(existentials),
        matrix=matrix,
        semantics=formula.semantics,
        constants_allowed=formula.constants_allowed or uses_constants,
    )


class VariableAllocator:
    """Hands out fresh, strictly increasing variable ids.

    Each id carries a provenance label (source variable, copy index, gadget
    tag) so reduction traces can explain every fresh variable.

    Args:
        start: First id to hand out.
        limit: Optional largest id that may be allocated.
    """

    def __init__(self, start: int = 1, limit: int | None = None):
        if start <= 0:
            raise FormulaError("allocator must start at a positive id", field="start", value=start)
        self.start = start
        self.next_id = start
        self.limit = limit
        self.labels: dict[int, str] = {}

    @classmethod
    def after(cls, *formulas: QuantifiedFormula, limit: int | None = None) -> VariableAllocator:
        """Allocator whose first id follows every variable of ``formulas``."""
        start = max((f.max_variable for f in formulas), default=0) + 1
        return cls(start=start, limit=limit)

    def fresh(self, label: str = "") -> int:
        if self.limit is not None and self.next_id > self.limit:
            raise AllocatorExhaustedError(self.limit)
        var = self.next_id
        self.next_id += 1
        if label:
            self.labels[var] = label
        return var

    def fresh_many(self, count: int, label: str = "") -> list[int]:
        return [self.fresh(f"{label}[{k}]" if label else "") for k in range(1, count + 1)]

    @property
    def allocated(self) -> int:
        return self.next_id - self.start
