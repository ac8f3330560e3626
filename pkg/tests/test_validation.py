"""Tests for qbforge.validation."""

import pytest

from qbforge.exceptions import ClassViolationError, NotFoundError
from qbforge.formula import AppearanceProfile, Clause, QuantifiedFormula, Semantics, VariableAllocator
from qbforge.gadgets import build_Q1, build_Q3
from qbforge.validation import CLASS_SPECS, ClassSpec, get_class_spec, require_class, validate_class


def mono(universals, existentials, *clauses):
    return QuantifiedFormula(
        universals=universals,
        existentials=existentials,
        matrix=tuple(Clause.of(*c) for c in clauses),
        semantics=Semantics.NAE,
    )


class TestValidateClass:
    def test_q3_profile(self):
        q3 = build_Q3(VariableAllocator()).as_formula()
        spec = ClassSpec(profile=AppearanceProfile(1, 1, 2, 2), three_distinct=True)
        assert validate_class(q3, spec).passed

    def test_q1_is_balanced_2222_except_size(self):
        q1 = build_Q1(VariableAllocator()).as_formula()
        report = validate_class(q1, "b2222")
        assert report.predicate("profile").passed
        assert not report.predicate("balanced").passed
        assert report.predicate("balanced").detail == "5 universals vs 4 existentials"

    def test_repeated_variable_fails_distinct(self):
        formula = QuantifiedFormula(existentials=(1, 2), matrix=(Clause.of(1, 1, 2),))
        report = validate_class(formula, ClassSpec(distinct_variables=True))
        assert not report.passed
        assert report.first_failure.clause_index == 0

    def test_linear(self):
        ok = mono((), (1, 2, 3, 4, 5), (1, 2, 3), (3, 4, 5))
        shared = mono((), (1, 2, 3, 4), (1, 2, 3), (1, 2, 4))
        assert validate_class(ok, ClassSpec(linear=True)).passed
        failure = validate_class(shared, ClassSpec(linear=True)).first_failure
        assert failure.detail == "clauses 0 and 1 share variables 1 and 2"

    def test_monotone_reports_variable(self):
        formula = mono((), (1, 2, 3), (1, -2, 3))
        failure = validate_class(formula, ClassSpec(monotone=True)).first_failure
        assert failure.variable == 2

    def test_max_one_universal(self):
        formula = mono((1, 2), (3,), (1, 2, 3))
        assert not validate_class(formula, ClassSpec(max_one_universal=True)).passed

    def test_uniform_universals(self):
        formula = mono((1, 2), (3, 4, 5, 6), (1, 3, 4), (1, 5, 6), (2, 3, 4))
        assert not validate_class(formula, ClassSpec(uniform_universal_appearances=True)).passed

    def test_mono14_membership(self):
        # x1 universal once; 2..5 each four times in clauses of three distinct variables
        formula = mono(
            (1,),
            (2, 3, 4, 5),
            (1, 2, 3),
            (2, 3, 4),
            (2, 4, 5),
            (2, 3, 5),
            (3, 4, 5),
            (4, 5, 2),
        )
        report = validate_class(formula, "mono14")
        assert not report.passed
        assert not report.predicate("appearances").passed

    def test_three_distinct_rejects_two_clauses(self, sat3_instance):
        assert not validate_class(sat3_instance, ClassSpec(three_distinct=True)).passed

    def test_3sat3(self, sat3_instance):
        assert validate_class(sat3_instance, "3sat3").passed

    def test_mc_nae2(self):
        formula = QuantifiedFormula(
            existentials=(1, 2, 3),
            matrix=(Clause.of(1, 2, "T"), Clause.of(1, 3, "F"), Clause.of(2, 3, "F")),
            semantics=Semantics.NAE,
            constants_allowed=True,
        )
        assert validate_class(formula, "mc-nae2").passed

    def test_semantics_mismatch(self, sat3_instance):
        assert validate_class(sat3_instance, "nae").first_failure.name == "semantics"

    def test_unknown_class(self, tiny_nae):
        with pytest.raises(NotFoundError, match="class not found: nope"):
            validate_class(tiny_nae, "nope")

    def test_to_dict(self, tiny_nae):
        data = validate_class(tiny_nae, "nae").to_dict()
        assert data["class"] == "nae"
        assert data["passed"] is True


class TestRequireClass:
    def test_raises_with_report(self, tiny_nae):
        with pytest.raises(ClassViolationError, match="not in class sat") as info:
            require_class(tiny_nae, "sat", route="strip-universals")
        assert info.value.route == "strip-universals"
        assert not info.value.report.passed

    def test_returns_report(self, tiny_nae):
        assert require_class(tiny_nae, "nae").passed


class TestRegistry:
    def test_registered_names(self):
        assert {"nae", "b2222", "b1122", "ae-1121", "ae-1112", "3sat3", "mono14", "mono13", "mc-nae2"} <= set(
            CLASS_SPECS
        )

    def test_get_class_spec(self):
        assert get_class_spec("mono13").linear
