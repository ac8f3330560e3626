"""Tests for qbforge.pipelines."""

import logging

import pytest

from qbforge.exceptions import ClassViolationError, NotFoundError, ReductionError
from qbforge.formula import Clause, QuantifiedFormula, Semantics
from qbforge.normalize import VerdictNo
from qbforge.pipelines import RouteInfo, RouteRunner
from qbforge.validation import validate_class


@pytest.fixture
def runner() -> RouteRunner:
    return RouteRunner()


class TestDiscover:
    def test_sorted_and_complete(self, runner):
        names = [route.name for route in runner.discover()]
        assert names == sorted(names)
        assert {
            "nae-to-b2222",
            "b2222-to-b1122",
            "b1122-to-1121",
            "b1122-to-1112",
            "nae-to-mono14",
            "mono14-to-mono13",
            "strip-universals",
            "nae-to-b1122",
            "nae-to-mono13",
            "3sat3-to-ae:1021",
            "3sat3-to-ae:0121",
            "3sat3-to-ae:1012",
            "3sat3-to-ae:0112",
        } == set(names)

    def test_cached(self, runner):
        assert runner.discover() is runner.discover()
        first = runner.discover()
        runner.invalidate_cache()
        assert runner.discover() is not first

    def test_composite_flag(self, runner):
        assert runner.get("nae-to-mono13").is_composite
        assert not runner.get("nae-to-mono14").is_composite


class TestGet:
    @pytest.mark.parametrize("alias", ["3sat3-to-ae:II", "3sat3-to-ae:1012", "3sat3-to-ae:(1,0,1,2)"])
    def test_variant_aliases(self, runner, alias):
        assert runner.get(alias).name == "3sat3-to-ae:1012"

    def test_unknown(self, runner):
        with pytest.raises(NotFoundError, match="route not found"):
            runner.get("nae-to-nowhere")

    def test_unknown_variant(self, runner):
        with pytest.raises(NotFoundError):
            runner.get("3sat3-to-ae:IV")


class TestPlan:
    def test_composite_steps(self, runner, caplog):
        with caplog.at_level(logging.INFO, logger="qbforge.pipelines"):
            steps = runner.plan("nae-to-b1122")
        assert [step.name for step in steps] == ["nae-to-b2222", "b2222-to-b1122"]
        assert "[DRY RUN] Would apply: nae-to-b2222" in caplog.text

    def test_primitive(self, runner):
        assert [step.name for step in runner.plan("strip-universals")] == ["strip-universals"]


class TestRun:
    def test_single_step(self, runner, sat3_instance):
        result = runner.run("3sat3-to-ae:I", sat3_instance)
        assert result.route == "3sat3-to-ae:0121"
        assert validate_class(result.target, "ae-0121").passed

    def test_composite_route(self, runner, tiny_nae, check_witness_maps):
        result = runner.run("nae-to-mono13", tiny_nae)
        assert result.route == "nae-to-mono13"
        assert validate_class(result.target, "mono13").passed
        assert check_witness_maps(result) == 2

    def test_source_class_checked(self, runner, tiny_nae):
        with pytest.raises(ClassViolationError) as info:
            runner.run("b2222-to-b1122", tiny_nae)
        assert info.value.route == "b2222-to-b1122"

    def test_verdict_no_short_circuits(self, runner, caplog):
        formula = QuantifiedFormula(
            existentials=(1, 2, 3), matrix=(Clause.of(1, 2, 3), Clause.of(3, 3)), semantics=Semantics.NAE
        )
        with caplog.at_level(logging.INFO, logger="qbforge.pipelines"):
            outcome = runner.run("nae-to-mono13", formula)
        assert isinstance(outcome, VerdictNo)
        assert outcome.clause_index == 1
        assert "short-circuited" in caplog.text

    def test_strip_verdict_no(self, runner):
        formula = QuantifiedFormula(universals=(1,), existentials=(2,), matrix=(Clause.of(2), Clause.of(1)))
        assert isinstance(runner.run("strip-universals", formula), VerdictNo)

    def test_bound_violation(self, runner, sat3_instance):
        tight = RouteInfo(
            "tight",
            "3sat3",
            "ae-1021",
            "no room",
            ("tight",),
            size_bound=lambda formula: 1,
            apply=runner.get("3sat3-to-ae:1021").apply,
        )
        runner.discover().append(tight)
        with pytest.raises(ReductionError, match="above its bound 1"):
            runner.run("tight", sat3_instance)

    def test_bounds_can_be_disabled(self, sat3_instance):
        lenient = RouteRunner(check_bounds=False, validate_target=False)
        tight = RouteInfo(
            "tight", "3sat3", "ae-1021", "no room", ("tight",), lambda formula: 1, lenient.get("3sat3-to-ae:1021").apply
        )
        lenient.discover().append(tight)
        assert lenient.run("tight", sat3_instance).target.universals == (4, 5, 6)

    @pytest.mark.slow
    def test_nae_to_b1122(self, runner, tiny_nae):
        result = runner.run("nae-to-b1122", tiny_nae)
        assert len(result.target.universals) == len(result.target.existentials)
