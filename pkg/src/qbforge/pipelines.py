"""Named reduction routes with class checks and size bounds.

Every route has a declared source and target class and a polynomial bound
on the number of target clauses. ``RouteRunner.run`` validates the source,
applies each primitive step, checks the step's bound against its own input,
and validates the final target.

Usage:
    runner = RouteRunner()
    runner.discover()                 # every registered route
    runner.plan("nae-to-b1122")       # dry run: the primitive steps
    result = runner.run("nae-to-b2222", formula)
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

from qbforge.bounded import VARIANTS, resolve_variant, sat3_bounded_to_forallexists, strip_universal_literals
from qbforge.exceptions import NotFoundError, ReductionError
from qbforge.formula import QuantifiedFormula, VariableAllocator
from qbforge.monotone import monotone14_to_monotone13_linear, nae_to_monotone_14
from qbforge.normalize import VerdictNo
from qbforge.reductions import (
    ReductionResult,
    balanced_1122_to_112x,
    balanced_2222_to_1122,
    compose_all,
    reduce_to_balanced_2222,
)
from qbforge.validation import require_class

logger = logging.getLogger(__name__)

StepFunction = Callable[[QuantifiedFormula, VariableAllocator], "ReductionResult | VerdictNo"]
SizeBound = Callable[[QuantifiedFormula], int]


def _size(formula: QuantifiedFormula) -> int:
    return len(formula.variables) + len(formula.matrix)


@dataclass
class RouteInfo:
    """Metadata about a registered route.

    ``steps`` lists the primitive routes a composite route runs, or just the
    route itself. ``size_bound`` maps a step input to the largest allowed
    clause count of its output.
    """

    name: str
    source_class: str
    target_class: str
    description: str
    steps: tuple[str, ...] = ()
    size_bound: SizeBound | None = field(default=None, repr=False, compare=False)
    apply: StepFunction | None = field(default=None, repr=False, compare=False)

    def __lt__(self, other: RouteInfo) -> bool:
        return self.name < other.name

    @property
    def is_composite(self) -> bool:
        return self.steps != (self.name,)


def _primitive(
    name: str, source: str, target: str, description: str, apply: StepFunction, bound: SizeBound
) -> RouteInfo:
    return RouteInfo(name, source, target, description, (name,), bound, apply)


def _sat3_route(digits: str) -> RouteInfo:
    return _primitive(
        f"3sat3-to-ae:{digits}",
        "3sat3",
        f"ae-{digits}",
        f"3-SAT-(3) to ∀∃ 3-SAT-({','.join(digits)}) by guarding 2-clauses",
        lambda formula, alloc: sat3_bounded_to_forallexists(formula, digits, alloc),
        lambda formula: len(formula.matrix),
    )


def _builtin_routes() -> list[RouteInfo]:
    routes = [
        _primitive(
            "nae-to-b2222",
            "nae",
            "b2222",
            "∀∃ NAE-3-SAT to balanced ∀∃ 3-SAT-(2,2,2,2)",
            reduce_to_balanced_2222,
            lambda formula: 3500 * _size(formula),
        ),
        _primitive(
            "b2222-to-b1122",
            "b2222",
            "b1122",
            "balanced (2,2,2,2) to balanced (1,1,2,2)",
            balanced_2222_to_1122,
            lambda formula: len(formula.matrix) + 86 * len(formula.universals),
        ),
        _primitive(
            "b1122-to-1121",
            "b1122",
            "ae-1121",
            "balanced (1,1,2,2) to ∀∃ 3-SAT-(1,1,2,1)",
            lambda formula, alloc: balanced_1122_to_112x(formula, (2, 1), alloc),
            lambda formula: len(formula.matrix) + 12 * len(formula.existentials),
        ),
        _primitive(
            "b1122-to-1112",
            "b1122",
            "ae-1112",
            "balanced (1,1,2,2) to ∀∃ 3-SAT-(1,1,1,2)",
            lambda formula, alloc: balanced_1122_to_112x(formula, (1, 2), alloc),
            lambda formula: len(formula.matrix) + 12 * len(formula.existentials),
        ),
        _primitive(
            "nae-to-mono14",
            "nae",
            "mono14",
            "∀∃ NAE-3-SAT to monotone ∀∃ NAE-3-SAT-(1,4)",
            nae_to_monotone_14,
            lambda formula: 600 * _size(formula),
        ),
        _primitive(
            "mono14-to-mono13",
            "mono14",
            "mono13",
            "monotone (1,4) to monotone linear (1,3)",
            monotone14_to_monotone13_linear,
            lambda formula: len(formula.matrix) + 20 * len(formula.existentials),
        ),
        _primitive(
            "strip-universals",
            "sat",
            "sat",
            "delete universal literals that appear at most once",
            lambda formula, _alloc: strip_universal_literals(formula),
            lambda formula: len(formula.matrix),
        ),
        RouteInfo(
            "nae-to-b1122",
            "nae",
            "b1122",
            "nae-to-b2222 followed by b2222-to-b1122",
            ("nae-to-b2222", "b2222-to-b1122"),
        ),
        RouteInfo(
            "nae-to-mono13",
            "nae",
            "mono13",
            "nae-to-mono14 followed by mono14-to-mono13",
            ("nae-to-mono14", "mono14-to-mono13"),
        ),
    ]
    routes.extend(_sat3_route(profile) for _, _, profile in VARIANTS.values())
    return routes


class RouteRunner:
    """Discovers, plans and runs reduction routes.

    Args:
        validate_source: Check the source class before running.
        validate_target: Check the target class after running.
        check_bounds: Assert each step's clause-count bound.
    """

    def __init__(self, *, validate_source: bool = True, validate_target: bool = True, check_bounds: bool = True):
        self.validate_source = validate_source
        self.validate_target = validate_target
        self.check_bounds = check_bounds
        self._routes: list[RouteInfo] | None = None

    # ------------------------------------------------------------------
    # Route discovery
    # ------------------------------------------------------------------

    def discover(self) -> list[RouteInfo]:
        """All registered routes, sorted by name."""
        if self._routes is not None:
            return self._routes
        self._routes = sorted(_builtin_routes())
        return self._routes

    def invalidate_cache(self) -> None:
        self._routes = None

    def get(self, name: str) -> RouteInfo:
        """Look up a route; ``3sat3-to-ae:`` also accepts variant names (base, I, II, III).

        Raises:
            NotFoundError: If no route has that name.
        """
        if name.startswith("3sat3-to-ae:"):
            try:
                name = f"3sat3-to-ae:{resolve_variant(name.split(':', 1)[1])[3]}"
            except ReductionError:
                raise NotFoundError("route", name) from None
        for route in self.discover():
            if route.name == name:
                return route
        raise NotFoundError("route", name)

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def plan(self, name: str) -> list[RouteInfo]:
        """Dry run: the primitive steps ``run`` would apply, in order."""
        route = self.get(name)
        steps = [self.get(step) for step in route.steps]
        for step in steps:
            logger.info("[DRY RUN] Would apply: %s - %s", step.name, step.description)
        return steps

    def run(self, name: str, formula: QuantifiedFormula) -> ReductionResult | VerdictNo:
        """Run a route end to end.

        Returns:
            The composed ReductionResult, or the VerdictNo with which a
            normalizing step short-circuited.

        Raises:
            NotFoundError: If the route is unknown.
            ClassViolationError: If the source or target is outside its class.
            ReductionError: If a step fails or exceeds its size bound.
        """
        route = self.get(name)
        if self.validate_source:
            require_class(formula, route.source_class, route=route.name)

        results: list[ReductionResult] = []
        current = formula
        for step in (self.get(s) for s in route.steps):
            assert step.apply is not None
            logger.info("Applying step %s: %s", step.name, step.description)
            try:
                outcome = step.apply(current, VariableAllocator.after(current))
            except Exception as e:
                logger.error("  Failed %s: %s", step.name, e)
                raise
            if isinstance(outcome, VerdictNo):
                logger.info("  %s short-circuited: %s", step.name, outcome)
                return outcome
            if self.check_bounds and step.size_bound is not None:
                self._check_bound(step, current, outcome.target)
            logger.info("  Applied %s (%d clauses)", step.name, len(outcome.target.matrix))
            results.append(outcome)
            current = outcome.target

        if self.validate_target:
            require_class(current, route.target_class, route=route.name)
        return results[0] if len(results) == 1 else compose_all(results, route.name)

    @staticmethod
    def _check_bound(step: RouteInfo, source: QuantifiedFormula, target: QuantifiedFormula) -> None:
        assert step.size_bound is not None
        bound = step.size_bound(source)
        if len(target.matrix) > bound:
            raise ReductionError(
                f"step {step.name} produced {len(target.matrix)} clauses, above its bound {bound}", route=step.name
            )
