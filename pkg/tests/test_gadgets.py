"""Tests for qbforge.gadgets."""

import dataclasses

import pytest

from qbforge.exceptions import NotFoundError
from qbforge.formula import Clause, Semantics, VariableAllocator, appearance_counts, evaluate_matrix
from qbforge.gadgets import (
    GADGET_CATALOG,
    ExtensionContract,
    build_E,
    build_E_forall,
    build_EQ,
    build_gadget,
    build_NE,
    build_NE_aux,
    build_P1,
    build_Q1,
    build_Q3,
    build_S,
    build_S_universal,
    build_x2,
    complete_by_template,
    complete_gadgets,
    verify_catalog,
    verify_contract,
)
from qbforge.oracle import decide_forall_exists


class TestShapes:
    @pytest.mark.parametrize(
        "gadget, clauses, existentials, universals",
        [
            (build_S(1, 2, 3, VariableAllocator(4)), 5, 3, 0),
            (build_x2(1, VariableAllocator(2)), 10, 7, 0),
            (build_E(1, VariableAllocator(2)), 25, 18, 0),
            (build_Q1(VariableAllocator()), 12, 4, 5),
            (build_Q3(VariableAllocator()), 6, 2, 5),
            (build_E_forall(1, VariableAllocator(2)), 2, 0, 2),
            (build_NE_aux(1, 2, VariableAllocator(3)), 6, 5, 0),
            (build_EQ(1, 2, VariableAllocator(3)), 14, 13, 0),
            (build_NE(1, 2, VariableAllocator(3)), 34, 33, 0),
            (build_P1(1, VariableAllocator(2)), 7, 5, 0),
        ],
    )
    def test_counts(self, gadget, clauses, existentials, universals):
        assert len(gadget.clauses) == clauses
        assert len(gadget.fresh_existentials) == existentials
        assert len(gadget.fresh_universals) == universals

    def test_s_allocation_order(self):
        gadget = build_S(1, -2, 3, VariableAllocator(4))
        assert gadget.roles == {"a": 4, "b": 5, "c": 6}
        assert gadget.clauses[0] == Clause.of(1, -4, 5)
        assert gadget.clauses[4] == Clause.of(-4, -5, -6)

    def test_s_repeated_literal_interface(self):
        assert build_S(1, 2, 2, VariableAllocator(3)).interface == (1, 2)

    def test_s_universal_marks_first_variable(self):
        assert build_S_universal(1, 2, 3, VariableAllocator(4)).universal_compatible == frozenset({1})

    def test_e_leading_fresh_variables(self):
        gadget = build_E(1, VariableAllocator(2))
        assert gadget.fresh_existentials[:3] == (2, 3, 4)
        assert gadget.roles["u"] == 2

    def test_e_interface_profile(self):
        formula = build_E(1, VariableAllocator(2)).as_formula()
        assert appearance_counts(formula)[1] == (2, 1)

    def test_p1_internal_variables_appear_four_times(self):
        gadget = build_P1(1, VariableAllocator(2))
        counts = appearance_counts(gadget.as_formula())
        assert counts[1] == (1, 0)
        assert all(counts[v] == (4, 0) for v in gadget.fresh_existentials)

    def test_nae_gadgets_are_monotone(self):
        for gadget in (build_NE_aux(1, 2, VariableAllocator(3)), build_NE(1, 2, VariableAllocator(3))):
            assert all(clause.is_monotone for clause in gadget.clauses)
            assert gadget.semantics is Semantics.NAE

    def test_ne_uses_interface_once(self):
        counts = appearance_counts(build_NE(1, 2, VariableAllocator(3)).as_formula())
        assert counts[1] == (1, 0)
        assert counts[2] == (1, 0)


class TestContracts:
    def test_catalog_passes(self):
        reports = verify_catalog()
        assert [r.gadget for r in reports] == list(GADGET_CATALOG)
        assert all(r.passed for r in reports)

    def test_case_counts(self):
        assert verify_contract(build_gadget("S")).cases == 8
        assert verify_contract(build_gadget("E_forall")).cases == 8
        assert verify_contract(build_gadget("Q1")).cases == 32

    def test_wrong_predicate_is_reported(self):
        gadget = build_EQ(1, 2, VariableAllocator(3))
        lying = dataclasses.replace(
            gadget, contract=ExtensionContract(Semantics.NAE, lambda beta: beta[1] != beta[2], "x differs from y")
        )
        report = verify_contract(lying)
        assert not report.passed
        assert report.cases == 1
        assert report.mismatch.assignment == {1: False, 2: False}
        assert report.mismatch.expected is False
        assert report.mismatch.actual is True

    def test_mutated_clause_list_fails(self, caplog):
        gadget = build_S(1, 2, 3, VariableAllocator(4))
        broken = dataclasses.replace(gadget, clauses=gadget.clauses[:3] + gadget.clauses[4:])
        report = verify_contract(broken)
        assert not report.passed
        assert report.to_dict()["mismatch"]["assignment"] == [-1, -2, -3]
        assert "violates its contract" in caplog.text

    def test_unknown_gadget(self):
        with pytest.raises(NotFoundError, match="gadget not found: Z"):
            build_gadget("Z")


class TestStandaloneFormulas:
    @pytest.mark.parametrize("name", ["Q1", "Q3"])
    def test_balancing_gadgets_are_yes_instances(self, name):
        assert decide_forall_exists(build_gadget(name).as_formula()).is_yes

    def test_e_forall_forces_d(self):
        formula = build_E_forall(1, VariableAllocator(2)).as_formula()
        assert decide_forall_exists(formula).is_yes


class TestCompletion:
    def test_q1_witness_rule(self):
        gadget = build_Q1(VariableAllocator())
        beta = dict.fromkeys(gadget.fresh_universals, True)
        filled = gadget.complete(beta)
        assert evaluate_matrix(gadget.clauses, {**beta, **filled}, Semantics.SAT)

    def test_e_needs_true(self):
        gadget = build_E(1, VariableAllocator(2))
        assert gadget.complete({1: False}) is None
        assert gadget.complete({1: True}) is not None

    def test_template_matches_direct_completion(self):
        gadget = build_EQ(10, 11, VariableAllocator(40))
        filled = complete_by_template(gadget, {10: True, 11: True})
        assert evaluate_matrix(gadget.clauses, {10: True, 11: True, **filled}, Semantics.NAE)
        assert complete_by_template(gadget, {10: True, 11: False}) is None

    def test_complete_gadgets_chains(self):
        alloc = VariableAllocator(3)
        parts = [build_EQ(1, 2, alloc), build_P1(1, alloc)]
        filled = complete_gadgets(parts, {1: False, 2: False})
        clauses = [c for part in parts for c in part.clauses]
        assert evaluate_matrix(clauses, {1: False, 2: False, **filled}, Semantics.NAE)
