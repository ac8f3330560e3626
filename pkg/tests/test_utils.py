"""Tests for qbforge.utils."""

from qbforge.utils import format_assignment, lexicographic_assignments


class TestLexicographicAssignments:
    def test_order_false_first_most_significant_first(self):
        assert list(lexicographic_assignments([3, 1])) == [
            {3: False, 1: False},
            {3: False, 1: True},
            {3: True, 1: False},
            {3: True, 1: True},
        ]

    def test_empty_yields_one_assignment(self):
        assert list(lexicographic_assignments([])) == [{}]

    def test_count(self):
        assert sum(1 for _ in lexicographic_assignments(range(1, 6))) == 32


class TestFormatAssignment:
    def test_signed_ids(self):
        assert format_assignment({1: True, 2: False, 3: True}) == "1 -2 3"

    def test_empty(self):
        assert format_assignment({}) == "-"

    def test_none(self):
        assert format_assignment(None) == "-"
