"""Structural class validators for restricted formula families.

A ``ClassSpec`` names a set of predicates (monotone, linear, balanced,
appearance profile, ...). ``validate_class`` evaluates every requested
predicate and reports the first violating clause or variable for each;
failures are report entries, never exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from qbforge.exceptions import ClassViolationError, NotFoundError
from qbforge.formula import AppearanceProfile, QuantifiedFormula, Semantics, appearance_counts


@dataclass(frozen=True)
class ClassSpec:
    """Predicates a formula must satisfy to belong to a class.

    Unset fields (False / None) are not checked.
    """

    name: str = "custom"
    semantics: Semantics | None = None
    monotone: bool = False
    linear: bool = False
    balanced: bool = False
    three_distinct: bool = False
    distinct_variables: bool = False
    clause_sizes: frozenset[int] | None = None
    profile: AppearanceProfile | None = None
    universal_appearances: int | None = None
    existential_appearances: int | None = None
    uniform_universal_appearances: bool = False
    max_one_universal: bool = False
    unquantified: bool = False
    constant_free: bool = False


@dataclass(frozen=True)
class PredicateResult:
    name: str
    passed: bool
    detail: str = ""
    clause_index: int | None = None
    variable: int | None = None


@dataclass(frozen=True)
class ClassReport:
    """Outcome of ``validate_class``: one entry per requested predicate."""

    class_name: str
    results: tuple[PredicateResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[PredicateResult]:
        return [r for r in self.results if not r.passed]

    @property
    def first_failure(self) -> PredicateResult | None:
        return next(iter(self.failures), None)

    def predicate(self, name: str) -> PredicateResult:
        for result in self.results:
            if result.name == name:
                return result
        raise NotFoundError("predicate", name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "class": self.class_name,
            "passed": self.passed,
            "predicates": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "clause": r.clause_index,
                    "variable": r.variable,
                }
                for r in self.results
            ],
        }


# ----------------------------------------------------------------------
# Predicates
# ----------------------------------------------------------------------


def _ok(name: str) -> PredicateResult:
    return PredicateResult(name, True)


def _check_semantics(formula: QuantifiedFormula, expected: Semantics) -> PredicateResult:
    if formula.semantics is expected:
        return _ok("semantics")
    return PredicateResult("semantics", False, f"expected {expected.value}, got {formula.semantics.value}")


def _check_constant_free(formula: QuantifiedFormula) -> PredicateResult:
    for index, clause in enumerate(formula.matrix):
        if clause.constants:
            return PredicateResult("constant_free", False, f"clause {index} contains a constant", clause_index=index)
    return _ok("constant_free")


def _check_unquantified(formula: QuantifiedFormula) -> PredicateResult:
    if formula.universals:
        var = formula.universals[0]
        return PredicateResult("unquantified", False, f"universal variable {var}", variable=var)
    return _ok("unquantified")


def _check_monotone(formula: QuantifiedFormula) -> PredicateResult:
    for index, clause in enumerate(formula.matrix):
        for lit in clause.literals:
            if lit.negated:
                return PredicateResult(
                    "monotone", False, f"clause {index} negates {lit.var}", clause_index=index, variable=lit.var
                )
    return _ok("monotone")


def _check_linear(formula: QuantifiedFormula) -> PredicateResult:
    seen: dict[tuple[int, int], int] = {}
    for index, clause in enumerate(formula.matrix):
        vars_ = sorted(clause.variables)
        for i in range(len(vars_)):
            for j in range(i + 1, len(vars_)):
                pair = (vars_[i], vars_[j])
                other = seen.setdefault(pair, index)
                if other != index:
                    return PredicateResult(
                        "linear",
                        False,
                        f"clauses {other} and {index} share variables {pair[0]} and {pair[1]}",
                        clause_index=index,
                        variable=pair[0],
                    )
    return _ok("linear")


def _check_balanced(formula: QuantifiedFormula) -> PredicateResult:
    p_u, p_e = len(formula.universals), len(formula.existentials)
    if p_u == p_e:
        return _ok("balanced")
    return PredicateResult("balanced", False, f"{p_u} universals vs {p_e} existentials")


def _check_three_distinct(formula: QuantifiedFormula) -> PredicateResult:
    for index, clause in enumerate(formula.matrix):
        if len(clause) != 3 or clause.constants or not clause.has_distinct_variables:
            return PredicateResult(
                "three_distinct", False, f"clause {index} {clause} is not a 3-clause", clause_index=index
            )
    return _ok("three_distinct")


def _check_distinct_variables(formula: QuantifiedFormula) -> PredicateResult:
    for index, clause in enumerate(formula.matrix):
        if not clause.has_distinct_variables:
            return PredicateResult(
                "distinct_variables", False, f"clause {index} {clause} repeats a variable", clause_index=index
            )
    return _ok("distinct_variables")


def _check_clause_sizes(formula: QuantifiedFormula, sizes: frozenset[int]) -> PredicateResult:
    for index, clause in enumerate(formula.matrix):
        if len(clause) not in sizes:
            return PredicateResult(
                "clause_sizes", False, f"clause {index} has {len(clause)} atoms", clause_index=index
            )
    return _ok("clause_sizes")


def _check_counts(
    name: str,
    formula: QuantifiedFormula,
    counts: dict[int, tuple[int, int]],
    universal: tuple[int, int] | int | None,
    existential: tuple[int, int] | int | None,
) -> PredicateResult:
    for block, expected in ((formula.universals, universal), (formula.existentials, existential)):
        if expected is None:
            continue
        for var in block:
            actual: tuple[int, int] | int = counts[var] if isinstance(expected, tuple) else sum(counts[var])
            if actual != expected:
                detail = f"variable {var} appears {actual}, expected {expected}"
                return PredicateResult(name, False, detail, variable=var)
    return _ok(name)


def _check_uniform_universals(counts: dict[int, tuple[int, int]], formula: QuantifiedFormula) -> PredicateResult:
    totals = {sum(counts[var]) for var in formula.universals}
    if len(totals) <= 1:
        return _ok("uniform_universal_appearances")
    var = next(v for v in formula.universals if sum(counts[v]) != sum(counts[formula.universals[0]]))
    return PredicateResult(
        "uniform_universal_appearances", False, f"universal appearance counts differ: {sorted(totals)}", variable=var
    )


def _check_max_one_universal(formula: QuantifiedFormula) -> PredicateResult:
    universals = set(formula.universals)
    for index, clause in enumerate(formula.matrix):
        if sum(1 for lit in clause.literals if lit.var in universals) > 1:
            return PredicateResult(
                "max_one_universal", False, f"clause {index} has several universals", clause_index=index
            )
    return _ok("max_one_universal")


def validate_class(formula: QuantifiedFormula, spec: ClassSpec | str) -> ClassReport:
    """Check ``formula`` against every predicate requested by ``spec``.

    Args:
        formula: The formula to check.
        spec: A ClassSpec or the name of a registered class.

    Returns:
        A ClassReport; ``report.passed`` is True when all predicates hold.

    Raises:
        NotFoundError: If ``spec`` names an unknown class.
    """
    if isinstance(spec, str):
        spec = get_class_spec(spec)
    counts = appearance_counts(formula)
    results: list[PredicateResult] = []

    if spec.semantics is not None:
        results.append(_check_semantics(formula, spec.semantics))
    if spec.constant_free:
        results.append(_check_constant_free(formula))
    if spec.unquantified:
        results.append(_check_unquantified(formula))
    if spec.monotone:
        results.append(_check_monotone(formula))
    if spec.linear:
        results.append(_check_linear(formula))
    if spec.balanced:
        results.append(_check_balanced(formula))
    if spec.three_distinct:
        results.append(_check_three_distinct(formula))
    if spec.distinct_variables:
        results.append(_check_distinct_variables(formula))
    if spec.clause_sizes is not None:
        results.append(_check_clause_sizes(formula, spec.clause_sizes))
    if spec.profile is not None:
        results.append(
            _check_counts("profile", formula, counts, spec.profile.universal, spec.profile.existential)
        )
    if spec.universal_appearances is not None or spec.existential_appearances is not None:
        results.append(
            _check_counts("appearances", formula, counts, spec.universal_appearances, spec.existential_appearances)
        )
    if spec.uniform_universal_appearances:
        results.append(_check_uniform_universals(counts, formula))
    if spec.max_one_universal:
        results.append(_check_max_one_universal(formula))

    return ClassReport(spec.name, tuple(results))


def require_class(formula: QuantifiedFormula, spec: ClassSpec | str, route: str | None = None) -> ClassReport:
    """Validate and raise ClassViolationError on failure."""
    report = validate_class(formula, spec)
    if not report.passed:
        raise ClassViolationError(report, route=route)
    return report


# ----------------------------------------------------------------------
# Registered classes
# ----------------------------------------------------------------------


def _ae(name: str, profile: str, *, balanced: bool = False) -> ClassSpec:
    return ClassSpec(
        name=name,
        semantics=Semantics.SAT,
        three_distinct=True,
        balanced=balanced,
        profile=AppearanceProfile.parse(profile),
    )


def _mono(name: str, **kwargs: Any) -> ClassSpec:
    return ClassSpec(name=name, semantics=Semantics.NAE, monotone=True, three_distinct=True, **kwargs)


CLASS_SPECS: dict[str, ClassSpec] = {
    spec.name: spec
    for spec in (
        ClassSpec(name="nae", semantics=Semantics.NAE, constant_free=True),
        ClassSpec(name="nae3", semantics=Semantics.NAE, constant_free=True, clause_sizes=frozenset({3})),
        ClassSpec(name="sat", semantics=Semantics.SAT, constant_free=True),
        _ae("b2222", "2222", balanced=True),
        _ae("b1122", "1122", balanced=True),
        _ae("ae-1021", "1021"),
        _ae("ae-0121", "0121"),
        _ae("ae-1012", "1012"),
        _ae("ae-0112", "0112"),
        _ae("ae-1121", "1121"),
        _ae("ae-1112", "1112"),
        ClassSpec(
            name="3sat3",
            semantics=Semantics.SAT,
            unquantified=True,
            constant_free=True,
            distinct_variables=True,
            clause_sizes=frozenset({2, 3}),
            profile=AppearanceProfile(0, 0, 2, 1),
        ),
        _mono("mono14", universal_appearances=1, existential_appearances=4, max_one_universal=True),
        _mono("mono13", linear=True, universal_appearances=1, existential_appearances=3, max_one_universal=True),
        _mono("mono-s1", existential_appearances=1, uniform_universal_appearances=True),
        _mono("mono12", universal_appearances=1, existential_appearances=2),
        _mono("mono-s2", existential_appearances=2, uniform_universal_appearances=True),
        _mono(
            "mono-s2-1u", existential_appearances=2, uniform_universal_appearances=True, max_one_universal=True
        ),
        ClassSpec(
            name="mc-nae2",
            semantics=Semantics.NAE,
            monotone=True,
            unquantified=True,
            distinct_variables=True,
            clause_sizes=frozenset({3}),
            existential_appearances=2,
        ),
    )
}


def get_class_spec(name: str) -> ClassSpec:
    try:
        return CLASS_SPECS[name]
    except KeyError:
        raise NotFoundError("class", name) from None
