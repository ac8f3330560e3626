"""Tests for qbforge.deciders, including sweeps against the oracle."""

from itertools import combinations, combinations_with_replacement, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbforge.deciders import (
    ClauseGraph,
    DeciderAnswer,
    decide_mc_nae2,
    decide_monotone_12,
    decide_monotone_s1,
    decide_monotone_s2_one_universal,
    decide_poly,
    match_decider,
    promote_monotone_12,
    refute_monotone_s2,
    simplify_mc_nae2,
)
from qbforge.exceptions import ClassViolationError, FormulaError, NotFoundError
from qbforge.formula import Clause, QuantifiedFormula, Semantics
from qbforge.generate import GeneratorConfig, generate_instance
from qbforge.oracle import decide_forall_exists, decide_matrix
from qbforge.utils import lexicographic_assignments
from qbforge.validation import validate_class


def mono(universals, existentials, *clauses, constants=False):
    return QuantifiedFormula(
        universals=universals,
        existentials=existentials,
        matrix=tuple(Clause.of(*c) for c in clauses),
        semantics=Semantics.NAE,
        constants_allowed=constants,
    )


def mc(existentials, *clauses):
    return mono((), existentials, *clauses, constants=True)


def mc_instances(m):
    """Every MC-NAE-3-SAT-2 instance on m clauses, up to renaming and constant order."""
    pairs = list(combinations(range(m), 2))
    for q in range(min(6, 3 * m // 2) + 1):
        for placement in combinations_with_replacement(pairs, q):
            variables = [[] for _ in range(m)]
            for var, (first, second) in enumerate(placement, start=1):
                variables[first].append(var)
                variables[second].append(var)
            if any(len(vs) > 3 for vs in variables):
                continue
            fills = [range(3 - len(vs) + 1) for vs in variables]
            for trues in product(*fills):
                clauses = [
                    (*vs, *["T"] * t, *["F"] * (3 - len(vs) - t)) for vs, t in zip(variables, trues, strict=True)
                ]
                formula = mc(tuple(range(1, q + 1)), *clauses)
                if validate_class(formula, "mc-nae2").passed:
                    yield formula


seeds = st.integers(min_value=0, max_value=10_000)


class TestClauseGraph:
    def test_odd_cycle(self):
        graph = ClauseGraph([Clause.of(1, 2), Clause.of(2, 3), Clause.of(3, 1)])
        assert graph.summary() == {"odd-cycle": 1}

    def test_even_cycle_is_other(self):
        graph = ClauseGraph(
            [Clause.of(1, 2), Clause.of(2, 3), Clause.of(3, 4), Clause.of(4, 1)]
            + [Clause.of(5, 6), Clause.of(6, 7), Clause.of(7, 5)]
        )
        assert len(graph.components()) == 2
        assert graph.summary() == {"other": 1, "odd-cycle": 1}

    def test_single_appearance_rejected(self):
        with pytest.raises(FormulaError, match="appears 1 times"):
            ClauseGraph([Clause.of(1, 2), Clause.of(2, 3)])

    def test_shared_pair_rejected(self):
        with pytest.raises(FormulaError, match="share two variables"):
            ClauseGraph([Clause.of(1, 2, 3), Clause.of(1, 2, 4), Clause.of(3, 4)])

    def test_negation_rejected(self):
        with pytest.raises(FormulaError, match="clause-graph vertex"):
            ClauseGraph([Clause.of(1, -2)])


class TestDecideMcNae2:
    def test_all_equal_constants_after_substitution(self):
        verdict = decide_mc_nae2(mc((1,), (1, "T", "T"), (1, "F", "F")))
        assert verdict.answer is DeciderAnswer.NO
        assert "three equal constants" in verdict.reason

    def test_empty(self):
        assert decide_mc_nae2(mc(())).answer is DeciderAnswer.YES

    def test_constant_pairs_substitute_to_fixpoint(self):
        formula = mc((1, 2), (1, "T", "F"), (1, 2, "T"), (2, "F", "F"))
        residual = simplify_mc_nae2(formula, upto=1)
        assert residual.matrix == ()
        assert residual.existentials == ()
        assert decide_mc_nae2(formula).answer is DeciderAnswer.YES

    def test_odd_cycle_survives(self):
        formula = mc((1, 2, 3), (1, 2, "T"), (2, 3, "F"), (3, 1, "T"))
        verdict = decide_mc_nae2(formula)
        assert verdict.is_yes
        assert "1 odd-cycle" in verdict.reason

    def test_wrong_class(self, tiny_nae):
        with pytest.raises(ClassViolationError, match="mc-nae2"):
            decide_mc_nae2(tiny_nae)

    @given(q=st.integers(min_value=2, max_value=6), extra=st.integers(min_value=0, max_value=2), seed=seeds)
    @settings(max_examples=80, deadline=None)
    def test_agrees_with_oracle(self, q, extra, seed):
        config = GeneratorConfig(seed=seed, existentials=q, clauses=-(-2 * q // 3) + extra, class_name="mc-nae2")
        formula = generate_instance(config)
        expected = decide_matrix(formula.matrix, Semantics.NAE).is_yes
        assert decide_mc_nae2(formula).is_yes == expected
        for upto in (1, 2, 3, 4):
            residual = simplify_mc_nae2(formula, upto)
            assert decide_matrix(residual.matrix, Semantics.NAE).is_yes == expected

    @pytest.mark.parametrize("m", [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)])
    def test_exhaustive_small_instances(self, m):
        checked = 0
        answers = set()
        for formula in mc_instances(m):
            expected = decide_matrix(formula.matrix, Semantics.NAE).is_yes
            assert decide_mc_nae2(formula).is_yes == expected, formula
            answers.add(expected)
            checked += 1
        assert checked > 0
        assert answers == {True, False}


class TestDecideMonotoneS1:
    def test_mixed_clauses(self):
        verdict = decide_monotone_s1(mono((1, 2, 3), (4, 5, 6), (1, 4, 5), (2, 3, 6)))
        assert verdict.answer is DeciderAnswer.YES

    def test_all_universal_clause(self):
        formula = mono((1, 2, 3), (4, 5, 6), (1, 2, 3), (4, 5, 6))
        verdict = decide_monotone_s1(formula)
        assert verdict.answer is DeciderAnswer.NO
        assert verdict.clause_index == 0
        assert verdict.counterexample == {1: False, 2: False, 3: False}
        assert not decide_matrix(formula.matrix, Semantics.NAE, fixed=verdict.counterexample).is_yes

    @pytest.mark.parametrize("p, q", [(1, 2), (2, 1), (3, 3), (2, 4), (4, 2)])
    @pytest.mark.parametrize("seed", range(8))
    def test_agrees_with_oracle(self, p, q, seed):
        formula = generate_instance(GeneratorConfig(seed=seed, universals=p, existentials=q, class_name="mono-s1"))
        assert decide_monotone_s1(formula).is_yes == decide_forall_exists(formula).is_yes


class TestDecideMonotoneS2OneUniversal:
    def test_trivial_yes(self):
        formula = mono((1, 2), (3, 4, 5), (1, 3, 4), (2, 4, 5), (3, 5, 4))
        verdict = decide_monotone_s2_one_universal(mono((1,), (3, 4), (1, 3, 4), (3, 4, 1)))
        assert verdict.answer is DeciderAnswer.TRIVIAL_YES
        assert verdict.to_dict()["verdict"] == "TRIVIAL-YES"
        with pytest.raises(ClassViolationError):
            decide_monotone_s2_one_universal(formula)

    def test_empty(self):
        assert decide_monotone_s2_one_universal(mono((), ())).answer is DeciderAnswer.TRIVIAL_YES

    @pytest.mark.parametrize("p, q", [(2, 2), (3, 3), (1, 4), (4, 4)])
    @pytest.mark.parametrize("seed", range(6))
    def test_agrees_with_oracle(self, p, q, seed):
        config = GeneratorConfig(seed=seed, universals=p, existentials=q, class_name="mono-s2-1u")
        assert decide_forall_exists(generate_instance(config)).is_yes


class TestDecideMonotone12:
    def test_three_universals(self):
        formula = mono((1, 2, 3, 5, 6), (4, 7), (1, 2, 3), (4, 5, 7), (4, 6, 7))
        verdict = decide_monotone_12(formula)
        assert verdict.answer is DeciderAnswer.NO
        assert verdict.counterexample == {1: False, 2: False, 3: False, 5: False, 6: False}

    def test_promotion_to_no(self):
        formula = mono((1, 2, 3, 4), (5,), (5, 1, 2), (5, 3, 4))
        verdict = decide_monotone_12(formula)
        assert verdict.answer is DeciderAnswer.NO
        assert verdict.clause_index == 1
        assert verdict.counterexample == {1: True, 2: True, 3: False, 4: False}
        assert not decide_matrix(formula.matrix, Semantics.NAE, fixed=verdict.counterexample).is_yes

    def test_immediate_yes(self):
        verdict = decide_monotone_12(mono((1, 2), (5, 6), (5, 1, 6), (5, 2, 6)))
        assert verdict.answer is DeciderAnswer.YES
        assert verdict.steps == 1

    @pytest.mark.parametrize("p, q", [(2, 2), (4, 1), (3, 3), (1, 4), (5, 2), (4, 4)])
    @pytest.mark.parametrize("seed", range(8))
    def test_agrees_with_oracle(self, p, q, seed):
        formula = generate_instance(GeneratorConfig(seed=seed, universals=p, existentials=q, class_name="mono12"))
        verdict = decide_monotone_12(formula)
        assert verdict.is_yes == decide_forall_exists(formula).is_yes
        if not verdict.is_yes:
            assert not decide_matrix(formula.matrix, Semantics.NAE, fixed=verdict.counterexample).is_yes

    @given(seed=seeds, order=st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_clause_order_does_not_matter(self, seed, order):
        formula = generate_instance(GeneratorConfig(seed=seed, universals=4, existentials=4, class_name="mono12"))
        shuffled = list(formula.matrix)
        order.shuffle(shuffled)
        assert decide_monotone_12(formula.with_matrix(shuffled)).answer is decide_monotone_12(formula).answer

    def test_promote_one_step(self):
        formula = mono((1, 2, 3, 4), (5,), (5, 1, 2), (5, 3, 4))
        promoted = promote_monotone_12(formula)
        assert promoted.universals == (1, 2, 3, 4, 5)
        assert promoted.existentials == ()
        assert promoted.matrix == (Clause.of(5, 3, 4),)
        assert promote_monotone_12(promoted) is None

    @pytest.mark.parametrize("p, q", [(2, 2), (3, 3), (1, 4), (5, 2), (4, 4)])
    @pytest.mark.parametrize("seed", range(8))
    def test_each_promotion_keeps_the_answer(self, p, q, seed):
        formula = generate_instance(GeneratorConfig(seed=seed, universals=p, existentials=q, class_name="mono12"))
        expected = decide_forall_exists(formula).is_yes
        assert decide_monotone_12(formula).is_yes == expected

        stage, promotions = formula, 0
        while (promoted := promote_monotone_12(stage)) is not None:
            assert decide_forall_exists(promoted).is_yes == expected, promoted
            stage, promotions = promoted, promotions + 1
        assert promotions <= len(formula.matrix)
        universals = set(stage.universals)
        has_full_clause = any(set(clause.variables) <= universals for clause in stage.matrix)
        assert has_full_clause is not expected


class TestRefuteMonotoneS2:
    def test_oracle_counterexample_is_verified(self):
        formula = mono((1, 2, 3, 4), (5,), (5, 1, 2), (5, 3, 4))
        counterexample = decide_forall_exists(formula).counterexample
        assert counterexample is not None
        assert refute_monotone_s2(formula, counterexample)

    def test_yes_instance_never_refuted(self):
        formula = mono((1, 2), (5, 6), (5, 1, 6), (5, 2, 6))
        for values in ((False, False), (False, True), (True, False), (True, True)):
            assert not refute_monotone_s2(formula, dict(zip((1, 2), values, strict=True)))

    def test_missing_universal(self):
        formula = mono((1, 2), (5, 6), (5, 1, 6), (5, 2, 6))
        with pytest.raises(FormulaError, match="misses"):
            refute_monotone_s2(formula, {1: True})

    @pytest.mark.parametrize("p, q", [(2, 2), (1, 4), (3, 3), (2, 5)])
    @pytest.mark.parametrize("seed", range(6))
    def test_every_assignment_agrees_with_oracle(self, p, q, seed):
        formula = generate_instance(GeneratorConfig(seed=seed, universals=p, existentials=q, class_name="mono-s2"))
        for sigma in lexicographic_assignments(formula.universals):
            extendable = decide_matrix(formula.matrix, Semantics.NAE, fixed=sigma).is_yes
            assert refute_monotone_s2(formula, sigma) is (not extendable), sigma


class TestDispatch:
    def test_match_order(self):
        assert match_decider(mc((1,), (1, "T", "T"), (1, "F", "F"))) == "mc-nae2"
        assert match_decider(mono((1, 2, 3), (4, 5, 6), (1, 4, 5), (2, 3, 6))) == "mono-s1"
        assert match_decider(mono((1, 2, 3, 4), (5,), (5, 1, 2), (5, 3, 4))) == "mono12"

    def test_decide_poly(self):
        verdict = decide_poly(mono((1, 2, 3, 4), (5,), (5, 1, 2), (5, 3, 4)))
        assert verdict.decider == "mono12"
        assert verdict.to_dict()["counterexample"] == [1, 2, -3, -4]

    def test_no_match(self, tiny_nae):
        assert match_decider(tiny_nae) is None
        with pytest.raises(NotFoundError, match="decider not found"):
            decide_poly(tiny_nae)
