"""Exhaustive search engine behind the oracle.

Clauses are compiled into constraints ``(kind, lits)`` over signed integer
literals, where kind is ``"sat"`` (some literal true) or ``"nae"`` (some
literal true and some false). Constants and fixed variables are folded in
at compile time, so a NAE clause that already holds a T becomes a SAT
constraint over its negated literals.

``SearchEngine`` decides existential satisfiability with DPLL-style
backtracking: unit propagation, pure literals, splitting into
variable-disjoint components and a cache of solved components keyed up to
renaming. ``UniversalSearch`` finds the lexicographically least universal
assignment without an extension, by enumeration for few universals and by
counterexample-guided refinement for many.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterable, Mapping, Sequence

import networkx as nx

from qbforge.exceptions import BudgetExceededError
from qbforge.formula import Clause, Constant, Semantics

logger = logging.getLogger(__name__)

SAT = "sat"
NAE = "nae"

Constraint = tuple[str, tuple[int, ...]]
Constraints = tuple[Constraint, ...]

# Deep backtracking on large reduction targets needs more than the default.
_RECURSION_LIMIT = 20000


def _ensure_recursion_limit() -> None:
    if sys.getrecursionlimit() < _RECURSION_LIMIT:
        sys.setrecursionlimit(_RECURSION_LIMIT)


class EvaluationCounter:
    """Counts search nodes against a fixed budget."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceededError(self.limit, self.used)


# ----------------------------------------------------------------------
# Compilation
# ----------------------------------------------------------------------


def _dedupe(lits: Iterable[int]) -> tuple[int, ...]:
    return tuple(dict.fromkeys(lits))


def _is_tautological(lits: tuple[int, ...]) -> bool:
    present = set(lits)
    return any(-lit in present for lit in lits)


def _close_nae(known: set[bool], rest: tuple[int, ...]) -> Constraint | None | bool:
    """Constraint left by a NAE clause whose decided atoms took ``known`` values.

    Returns True when already satisfied, None on conflict.
    """
    if known == {True, False}:
        return True
    if _is_tautological(rest):
        return True
    if known == {True}:
        return (SAT, tuple(-lit for lit in rest)) if rest else None
    if known == {False}:
        return (SAT, rest) if rest else None
    if len(rest) < 2:
        return None
    return (NAE, rest)


def _close_sat(satisfied: bool, rest: tuple[int, ...]) -> Constraint | None | bool:
    if satisfied or _is_tautological(rest):
        return True
    return (SAT, rest) if rest else None


def compile_clause(
    clause: Clause, semantics: Semantics, fixed: Mapping[int, bool] | None = None
) -> Constraint | None | bool:
    """Compile one clause; True means always satisfied, None means never."""
    fixed = fixed or {}
    known: set[bool] = set()
    rest: list[int] = []
    for atom in clause.atoms:
        if isinstance(atom, Constant):
            known.add(atom.truth)
        elif atom.var in fixed:
            known.add(fixed[atom.var] != atom.negated)
        else:
            rest.append(atom.to_int())
    lits = _dedupe(rest)
    if semantics is Semantics.SAT:
        return _close_sat(True in known, lits)
    return _close_nae(known, lits)


def compile_matrix(
    matrix: Iterable[Clause], semantics: Semantics, fixed: Mapping[int, bool] | None = None
) -> Constraints | None:
    """Compile a matrix; None when some clause can never be satisfied."""
    out: list[Constraint] = []
    for clause in matrix:
        compiled = compile_clause(clause, semantics, fixed)
        if compiled is None:
            return None
        if compiled is not True:
            out.append(compiled)  # type: ignore[arg-type]
    return tuple(out)


def restrict(constraints: Constraints, assignment: Mapping[int, bool]) -> Constraints | None:
    """Apply a partial assignment; None on conflict."""
    if not assignment:
        return constraints
    out: list[Constraint] = []
    for kind, lits in constraints:
        known: set[bool] = set()
        rest: list[int] = []
        for lit in lits:
            var = abs(lit)
            if var in assignment:
                known.add(assignment[var] == (lit > 0))
            else:
                rest.append(lit)
        if not known:
            out.append((kind, lits))
            continue
        remaining = tuple(rest)
        result = _close_sat(True in known, remaining) if kind == SAT else _close_nae(known, remaining)
        if result is None:
            return None
        if result is not True:
            out.append(result)  # type: ignore[arg-type]
    return tuple(out)


def constraint_variables(constraints: Constraints) -> list[int]:
    """Variables in first-appearance order."""
    return list(dict.fromkeys(abs(lit) for _, lits in constraints for lit in lits))


def split_components(constraints: Constraints) -> list[Constraints]:
    """Partition constraints into variable-disjoint groups (first-appearance order)."""
    graph = nx.Graph()
    for index, (_, lits) in enumerate(constraints):
        graph.add_node(("c", index))
        for lit in lits:
            graph.add_edge(("c", index), ("v", abs(lit)))
    groups: list[list[int]] = []
    for component in nx.connected_components(graph):
        groups.append(sorted(index for tag, index in component if tag == "c"))
    groups.sort(key=lambda g: g[0])
    return [tuple(constraints[i] for i in group) for group in groups]


def canonical_form(
    constraints: Constraints, leading: Sequence[int] = ()
) -> tuple[Constraints, list[int]]:
    """Rename variables densely: ``leading`` first, then by first appearance.

    Returns the renamed constraints and the original id of each canonical id.
    """
    order = list(leading)
    index = {var: i + 1 for i, var in enumerate(order)}
    for var in constraint_variables(constraints):
        if var not in index:
            order.append(var)
            index[var] = len(order)
    renamed = tuple(
        (kind, tuple(index[abs(lit)] if lit > 0 else -index[abs(lit)] for lit in lits))
        for kind, lits in constraints
    )
    return renamed, order


# ----------------------------------------------------------------------
# Existential search
# ----------------------------------------------------------------------


class SearchEngine:
    """DPLL-style satisfiability search over compiled constraints.

    Models only cover variables the search had to decide; absent variables
    are free.
    """

    def __init__(self, counter: EvaluationCounter):
        self.counter = counter
        self._cache: dict[Constraints, tuple[bool, ...] | None] = {}
        _ensure_recursion_limit()

    def solve(self, constraints: Constraints | None) -> dict[int, bool] | None:
        if constraints is None:
            return None
        return self._solve(constraints)

    def _solve(self, constraints: Constraints) -> dict[int, bool] | None:
        self.counter.tick()
        if not constraints:
            return {}

        key, order = canonical_form(constraints)
        if key in self._cache:
            cached = self._cache[key]
            if cached is None:
                return None
            return {order[i]: value for i, value in enumerate(cached)}

        model = self._search(constraints)
        if model is None:
            self._cache[key] = None
        else:
            self._cache[key] = tuple(model.get(var, False) for var in order)
        return model

    def _search(self, constraints: Constraints) -> dict[int, bool] | None:
        forced: dict[int, bool] = {}
        current: Constraints | None = constraints
        while current:
            step = self._units(current) or self._pure_literals(current)
            if not step:
                break
            forced.update(step)
            current = restrict(current, step)
        if current is None:
            return None
        if not current:
            return forced

        components = split_components(current)
        if len(components) > 1:
            merged = dict(forced)
            for component in components:
                sub = self._solve(component)
                if sub is None:
                    return None
                merged.update(sub)
            return merged

        var = min(constraint_variables(current))
        for value in (False, True):
            sub = self.solve(restrict(current, {var: value}))
            if sub is not None:
                return {**forced, var: value, **sub}
        return None

    @staticmethod
    def _units(constraints: Constraints) -> dict[int, bool]:
        units: dict[int, bool] = {}
        for kind, lits in constraints:
            if kind == SAT and len(lits) == 1:
                lit = lits[0]
                if units.get(abs(lit), lit > 0) != (lit > 0):
                    # Contradictory units; let restrict report the conflict.
                    return {abs(lit): lit > 0}
                units[abs(lit)] = lit > 0
        return units

    @staticmethod
    def _pure_literals(constraints: Constraints) -> dict[int, bool]:
        signs: dict[int, set[bool]] = {}
        in_nae: set[int] = set()
        for kind, lits in constraints:
            for lit in lits:
                signs.setdefault(abs(lit), set()).add(lit > 0)
                if kind == NAE:
                    in_nae.add(abs(lit))
        return {
            var: next(iter(polarity))
            for var, polarity in signs.items()
            if len(polarity) == 1 and var not in in_nae
        }


# ----------------------------------------------------------------------
# Universal search
# ----------------------------------------------------------------------


def _violation_cubes(constraint: Constraint) -> list[tuple[int, ...]]:
    """Conjunctions of literals that each falsify ``constraint``."""
    kind, lits = constraint
    if kind == SAT:
        return [tuple(-lit for lit in lits)]
    return [lits, tuple(-lit for lit in lits)]


class UniversalSearch:
    """Finds the lexicographically least universal assignment with no extension.

    Universals are ordered by ascending id with F before T. Components of the
    matrix are decided independently and cached up to renaming.
    """

    def __init__(self, engine: SearchEngine, enumeration_limit: int, candidate_window: int):
        self.engine = engine
        self.enumeration_limit = enumeration_limit
        self.candidate_window = candidate_window
        self._component_cache: dict[tuple[int, Constraints], tuple[bool, ...] | None] = {}

    @property
    def counter(self) -> EvaluationCounter:
        return self.engine.counter

    def least_failing(self, constraints: Constraints | None, universals: Sequence[int]) -> dict[int, bool] | None:
        """Least failing assignment over ``universals``, or None if every one extends."""
        ordered = sorted(universals)
        if constraints is None:
            return dict.fromkeys(ordered, False)

        candidates: list[dict[int, bool]] = []
        universal_set = set(ordered)
        for component in split_components(constraints):
            comp_universals = sorted(v for v in constraint_variables(component) if v in universal_set)
            failing = self._component(component, comp_universals)
            if failing is not None:
                candidates.append(failing)
        if not candidates:
            return None

        def as_vector(partial: dict[int, bool]) -> tuple[bool, ...]:
            return tuple(partial.get(var, False) for var in ordered)

        best = min(candidates, key=as_vector)
        return {var: best.get(var, False) for var in ordered}

    def _component(self, constraints: Constraints, universals: list[int]) -> dict[int, bool] | None:
        if not universals:
            return None if self.engine.solve(constraints) is not None else {}

        renamed, order = canonical_form(constraints, leading=universals)
        key = (len(universals), renamed)
        if key not in self._component_cache:
            canonical_universals = list(range(1, len(universals) + 1))
            if len(universals) <= self.enumeration_limit:
                found = self._enumerate(renamed, canonical_universals)
            else:
                found = self._refine(renamed, canonical_universals)
            self._component_cache[key] = (
                None if found is None else tuple(found.get(v, False) for v in canonical_universals)
            )
        cached = self._component_cache[key]
        if cached is None:
            return None
        return {order[i]: value for i, value in enumerate(cached)}

    # -- enumeration ----------------------------------------------------

    def _enumerate(self, constraints: Constraints, universals: list[int]) -> dict[int, bool] | None:
        memo: dict[tuple[int, Constraints], tuple[bool, ...] | None] = {}
        remaining = set(universals)

        def occurrences(residual: Constraints, var: int) -> tuple[bool, bool, bool]:
            pos = neg = nae = False
            for kind, lits in residual:
                for lit in lits:
                    if abs(lit) == var:
                        pos = pos or lit > 0
                        neg = neg or lit < 0
                        nae = nae or kind == NAE
            return pos, neg, nae

        def dfs(index: int, residual: Constraints | None) -> tuple[bool, ...] | None:
            self.counter.tick()
            width = len(universals) - index
            if residual is None:
                return (False,) * width
            if not any(abs(lit) in remaining for _, lits in residual for lit in lits):
                return (False,) * width if self.engine.solve(residual) is None else None
            key = (index, residual)
            if key in memo:
                return memo[key]

            var = universals[index]
            pos, neg, nae = occurrences(residual, var)
            all_nae = all(kind == NAE for kind, _ in residual)

            def branch(value: bool) -> tuple[bool, ...] | None:
                rest = dfs(index + 1, restrict(residual, {var: value}))
                return None if rest is None else (value, *rest)

            result: tuple[bool, ...] | None
            if not (pos or neg) or all_nae or (pos and not neg and not nae):
                # F is the only branch that can hold the least failure.
                result = branch(False)
            elif neg and not pos and not nae:
                harder = branch(True)
                result = None if harder is None else (branch(False) or harder)
            else:
                result = branch(False) or branch(True)
            memo[key] = result
            return result

        vector = dfs(0, constraints)
        if vector is None:
            return None
        return dict(zip(universals, vector, strict=True))

    # -- refinement -----------------------------------------------------

    def _abstraction_clauses(
        self, constraints: Constraints, candidate: Mapping[int, bool], next_selector: int
    ) -> tuple[list[Constraint], int] | None:
        """Clauses stating that ``candidate`` fails; None if it never fails."""
        residual = restrict(constraints, candidate)
        if residual is None:
            return [], next_selector
        if not residual:
            return None
        clauses: list[Constraint] = []
        selectors: list[int] = []
        for constraint in residual:
            for cube in _violation_cubes(constraint):
                if len(cube) == 1:
                    selectors.append(cube[0])
                    continue
                selector = next_selector
                next_selector += 1
                clauses.extend((SAT, (-selector, lit)) for lit in cube)
                selectors.append(selector)
        clauses.append((SAT, _dedupe(selectors)))
        return clauses, next_selector

    def _generalized_candidate(
        self, constraints: Constraints, target: dict[int, bool], history: list[dict[int, bool]]
    ) -> dict[int, bool] | None:
        """Existential model for ``target`` that also covers recent refuted assignments if possible."""
        base = restrict(constraints, target)
        if base is None:
            return None
        window = history[-self.candidate_window :] if self.candidate_window else []
        while window:
            combined: list[Constraint] = list(base)
            for previous in window:
                extra = restrict(constraints, previous)
                if extra is None:
                    break
                combined.extend(extra)
            else:
                model = self.engine.solve(tuple(combined))
                if model is not None:
                    return model
            window = window[1:]
        return self.engine.solve(base)

    def _refine(self, constraints: Constraints, universals: list[int]) -> dict[int, bool] | None:
        failing = self._find_failing(constraints, universals)
        if failing is None:
            return None
        return self._minimize(constraints, universals, failing)

    def _find_failing(self, constraints: Constraints, universals: list[int]) -> dict[int, bool] | None:
        universal_set = set(universals)
        existentials = [v for v in constraint_variables(constraints) if v not in universal_set]
        next_selector = max(constraint_variables(constraints), default=0) + 1
        abstraction: list[Constraint] = []
        history: list[dict[int, bool]] = []

        while True:
            self.counter.tick()
            proposal = self.engine.solve(tuple(abstraction))
            if proposal is None:
                logger.debug("Refinement closed after %d candidates", len(history))
                return None
            target = {var: proposal.get(var, False) for var in universals}
            model = self._generalized_candidate(constraints, target, history)
            if model is None:
                return target
            candidate = {var: model.get(var, False) for var in existentials}
            built = self._abstraction_clauses(constraints, candidate, next_selector)
            if built is None:
                return None
            clauses, next_selector = built
            abstraction.extend(clauses)
            history.append(target)

    def _minimize(
        self, constraints: Constraints, universals: list[int], failing: dict[int, bool]
    ) -> dict[int, bool]:
        prefix: dict[int, bool] = {}
        for position, var in enumerate(universals):
            if not failing[var]:
                prefix[var] = False
                continue
            trial = {**prefix, var: False}
            rest = universals[position + 1 :]
            found = self.least_failing(restrict(constraints, trial), rest)
            if found is not None:
                return {**trial, **found}
            prefix[var] = True
        return prefix
