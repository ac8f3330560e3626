"""Core utilities for qbforge."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence


def lexicographic_assignments(variables: Sequence[int]) -> Iterator[dict[int, bool]]:
    """Yield every assignment of ``variables`` in lexicographic order.

    The first variable is the most significant position and F precedes T,
    matching the oracle's counterexample order.

    Args:
        variables: Variables to enumerate, most significant first.

    Returns:
        An iterator of 2**len(variables) fresh dicts.
    """
    for values in itertools.product((False, True), repeat=len(variables)):
        yield dict(zip(variables, values, strict=True))


def format_assignment(assignment: Mapping[int, bool] | None) -> str:
    """Render an assignment as signed ids, e.g. ``1 -2 3``."""
    if not assignment:
        return "-"
    return " ".join(str(var if value else -var) for var, value in assignment.items())
