"""Shared test fixtures for qbforge."""

from pathlib import Path

import pytest

from qbforge.config import clear_config_cache
from qbforge.formula import Clause, QuantifiedFormula, Semantics
from qbforge.oracle import decide_matrix
from qbforge.utils import lexicographic_assignments

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _reset_config():
    """Reset global config between tests."""
    clear_config_cache()
    yield
    clear_config_cache()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def tiny_nae() -> QuantifiedFormula:
    """∀x1 ∃x2 x3: NAE(x1, x2, x3) ∧ NAE(¬x1, x2, ¬x3); a yes-instance."""
    return QuantifiedFormula(
        universals=(1,),
        existentials=(2, 3),
        matrix=(Clause.of(1, 2, 3), Clause.of(-1, 2, -3)),
        semantics=Semantics.NAE,
    )


@pytest.fixture
def no_nae() -> QuantifiedFormula:
    """∀x1 ∃x2: NAE(x1, x2) ∧ NAE(x1, ¬x2) is never nae-satisfied."""
    return QuantifiedFormula(
        universals=(1,),
        existentials=(2,),
        matrix=(Clause.of(1, 2), Clause.of(1, -2)),
        semantics=Semantics.NAE,
    )


@pytest.fixture
def sat3_instance() -> QuantifiedFormula:
    """A satisfiable 3-SAT-(3) instance: every variable twice unnegated, once negated."""
    return QuantifiedFormula(
        existentials=(1, 2, 3),
        matrix=(Clause.of(1, 2, 3), Clause.of(1, -2), Clause.of(2, -3), Clause.of(3, -1)),
    )


def _check_witness_maps(result) -> int:
    """Forward every source witness through ``result`` and back again.

    Returns the number of universal assignments that had a witness.
    """
    source = result.source
    extended = 0
    for sigma in lexicographic_assignments(source.universals):
        verdict = decide_matrix(source.matrix, source.semantics, fixed=sigma, variables=source.existentials)
        if not verdict.is_yes:
            continue
        extended += 1
        image = result.forward_witness({**sigma, **verdict.witness})
        assert result.target.evaluate(image), f"forward image fails the target under {sigma}"
        assert source.evaluate(result.backward_witness(image)), f"backward image fails the source under {sigma}"
    return extended


@pytest.fixture
def check_witness_maps():
    return _check_witness_maps


@pytest.fixture
def b2222_instance() -> QuantifiedFormula:
    """Balanced (2,2,2,2): four clauses over ∀1,2,3 ∃4,5,6 and their complements."""
    base = [Clause.of(1, 2, 4), Clause.of(3, 5, 6), Clause.of(1, 4, 5), Clause.of(2, 3, 6)]
    matrix = []
    for clause in base:
        matrix.append(clause)
        matrix.append(Clause.of(*(-v for v in clause.to_ints())))
    return QuantifiedFormula(universals=(1, 2, 3), existentials=(4, 5, 6), matrix=tuple(matrix))


@pytest.fixture
def b1122_instance() -> QuantifiedFormula:
    """Balanced (1,1,2,2) over ∀1,2,3 ∃4,5,6."""
    return QuantifiedFormula(
        universals=(1, 2, 3),
        existentials=(4, 5, 6),
        matrix=(
            Clause.of(1, 4, 5),
            Clause.of(-1, -4, 6),
            Clause.of(2, 4, -5),
            Clause.of(-2, -4, -6),
            Clause.of(3, 5, 6),
            Clause.of(-3, -5, -6),
        ),
    )


@pytest.fixture
def mono14_instance() -> QuantifiedFormula:
    """Monotone (1,4): every triple of ∃1..4 plus (x5 ∨ 1 ∨ 2)(x6 ∨ 3 ∨ 4), ∀5,6."""
    return QuantifiedFormula(
        universals=(5, 6),
        existentials=(1, 2, 3, 4),
        matrix=(
            Clause.of(1, 2, 3),
            Clause.of(1, 2, 4),
            Clause.of(1, 3, 4),
            Clause.of(2, 3, 4),
            Clause.of(5, 1, 2),
            Clause.of(6, 3, 4),
        ),
        semantics=Semantics.NAE,
    )
