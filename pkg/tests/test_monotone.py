"""Tests for qbforge.monotone."""

import pytest

from qbforge.exceptions import ClassViolationError, ReductionError
from qbforge.formula import Clause, QuantifiedFormula, Semantics
from qbforge.monotone import monotone14_to_monotone13_linear, nae_to_monotone_14, pad_two_clauses
from qbforge.normalize import VerdictNo
from qbforge.oracle import Budget, decide_forall_exists
from qbforge.validation import validate_class


class TestPadTwoClauses:
    def test_duplicates_first_atom(self, no_nae):
        assert pad_two_clauses(no_nae).matrix == (Clause.of(1, 1, 2), Clause.of(1, 1, -2))

    def test_keeps_three_clauses(self, tiny_nae):
        assert pad_two_clauses(tiny_nae).matrix == tiny_nae.matrix


class TestNaeToMonotone14:
    def test_target_class(self, tiny_nae):
        result = nae_to_monotone_14(tiny_nae)
        assert validate_class(result.target, "mono14").passed
        assert len(result.target.universals) == 1

    def test_witness_maps(self, tiny_nae, check_witness_maps):
        assert check_witness_maps(nae_to_monotone_14(tiny_nae)) == 2

    def test_two_clause_source(self, no_nae):
        assert validate_class(nae_to_monotone_14(no_nae).target, "mono14").passed

    def test_degenerate_source(self):
        formula = QuantifiedFormula(
            existentials=(1, 2), matrix=(Clause.of(1, 2), Clause.of(2, 2)), semantics=Semantics.NAE
        )
        assert isinstance(nae_to_monotone_14(formula), VerdictNo)

    def test_needs_nae(self, sat3_instance):
        with pytest.raises(ReductionError, match="needs nae semantics"):
            nae_to_monotone_14(sat3_instance)

    def test_trace(self, tiny_nae):
        names = [step.name for step in nae_to_monotone_14(tiny_nae).trace]
        assert names == ["normalize", "pad-2-clauses", "split", "link", "pad"]

    @pytest.mark.slow
    def test_no_instance_stays_no(self, no_nae):
        target = nae_to_monotone_14(no_nae).target
        assert not decide_forall_exists(target, Budget(5_000_000)).is_yes


class TestMonotone14ToMonotone13:
    def test_counts(self, mono14_instance):
        result = monotone14_to_monotone13_linear(mono14_instance)
        target = result.target
        assert len(target.matrix) == 6 + 20 * 4
        assert len(target.existentials) == 16 * 4
        assert len(target.universals) == 2 + 16 * 4

    def test_target_class(self, mono14_instance):
        assert validate_class(monotone14_to_monotone13_linear(mono14_instance).target, "mono13").passed

    def test_witness_maps(self, mono14_instance, check_witness_maps):
        assert check_witness_maps(monotone14_to_monotone13_linear(mono14_instance)) == 4

    def test_original_appearances_move_to_first_copies(self, mono14_instance):
        result = monotone14_to_monotone13_linear(mono14_instance)
        first = result.target.existentials[0]
        assert result.target.matrix[0].to_ints()[0] == first
        assert result.labels[first] == "z[1][1]"

    def test_wrong_class(self, tiny_nae):
        with pytest.raises(ClassViolationError, match="mono14"):
            monotone14_to_monotone13_linear(tiny_nae)

