"""Seeded random instances for every registered class.

Profile-bound classes are sampled by shuffle-and-repair: every variable
contributes one literal slot per required appearance, the slots are
shuffled into clauses, and random swaps remove repeated variables (plus
shared variable pairs or extra universals where the class forbids them).
Each candidate is checked with ``validate_class`` before it is returned.

Usage:
    config = GeneratorConfig(seed=7, universals=2, existentials=3, class_name="mono14")
    formula = generate_instance(config)
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from pydantic import BaseModel, ConfigDict, Field

from qbforge.config import get_config
from qbforge.exceptions import GeneratorError
from qbforge.formula import Atom, Clause, Constant, Literal, QuantifiedFormula, Semantics
from qbforge.validation import ClassSpec, get_class_spec, validate_class

logger = logging.getLogger(__name__)

REPAIR_ROUNDS_PER_SLOT = 40


class GeneratorConfig(BaseModel):
    """What to generate.

    ``clauses`` and ``universal_appearances`` are derived from the class
    when left unset; an inconsistent explicit value raises GeneratorError
    with the counts that would work.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 0
    universals: int = Field(default=0, ge=0)
    existentials: int = Field(default=3, ge=0)
    clauses: int | None = Field(default=None, ge=0)
    class_name: str = "nae"
    semantics: Semantics | None = None
    universal_appearances: int | None = Field(default=None, ge=1)
    max_attempts: int | None = Field(default=None, ge=1)


@dataclass
class _Plan:
    """Literal slots and clause sizes for one class and count combination."""

    slots: list[Atom]
    sizes: list[int]


# ----------------------------------------------------------------------
# Count planning
# ----------------------------------------------------------------------


def _slots_for(var: int, positive: int, negative: int) -> list[Atom]:
    return [Literal(var)] * positive + [Literal(var, True)] * negative


def _resolve_clauses(config: GeneratorConfig, total: int, sizes_of: int = 3) -> int:
    if total % sizes_of:
        raise GeneratorError(
            f"{total} literal slots do not fill clauses of size {sizes_of}",
            suggestion=f"choose counts whose slot total is a multiple of {sizes_of}",
        )
    needed = total // sizes_of
    if config.clauses is not None and config.clauses != needed:
        raise GeneratorError(
            f"class {config.class_name} with these counts needs {needed} clauses, not {config.clauses}",
            suggestion=f"use clauses={needed}",
        )
    return needed


def _uniform_universal_count(config: GeneratorConfig, existential_slots: int) -> int:
    if config.universal_appearances is not None:
        return config.universal_appearances
    p = config.universals
    if p == 0:
        return 1
    if config.clauses is None:
        return 1
    spare = 3 * config.clauses - existential_slots
    if spare <= 0 or spare % p:
        raise GeneratorError(
            f"{config.clauses} clauses cannot give {p} universals a uniform appearance count",
            suggestion="leave clauses unset or pass universal_appearances",
        )
    return spare // p


def _plan(spec: ClassSpec, config: GeneratorConfig) -> _Plan:
    p, q = config.universals, config.existentials
    universals = range(1, p + 1)
    existentials = range(p + 1, p + q + 1)

    if spec.unquantified and p:
        raise GeneratorError(f"class {spec.name} has no universals", suggestion="use universals=0")
    if spec.balanced and p != q:
        raise GeneratorError(f"class {spec.name} is balanced", suggestion=f"use universals=existentials={max(p, q)}")

    if spec.name == "mc-nae2":
        slots = [atom for var in existentials for atom in _slots_for(var, 2, 0)]
        m = config.clauses if config.clauses is not None else max(1, -(-len(slots) // 3))
        if 3 * m < len(slots):
            raise GeneratorError(
                f"{m} clauses cannot hold {len(slots)} appearances", suggestion=f"use clauses>={-(-len(slots) // 3)}"
            )
        # Constants fill the remaining positions.
        slots += [Constant.TRUE if k % 2 else Constant.FALSE for k in range(3 * m - len(slots))]
        return _Plan(slots, [3] * m)

    if spec.name == "3sat3":
        slots = [atom for var in existentials for atom in _slots_for(var, 2, 1)]
        m = config.clauses if config.clauses is not None else q + q // 4
        threes = 3 * q - 2 * m
        if not 0 <= threes <= m:
            raise GeneratorError(
                f"{q} variables at (2,1) cannot fill {m} clauses of size 2 or 3",
                suggestion=f"use clauses between {q} and {3 * q // 2}",
            )
        return _Plan(slots, [3] * threes + [2] * (m - threes))

    if spec.profile is not None:
        s1, s2, t1, t2 = spec.profile.s1, spec.profile.s2, spec.profile.t1, spec.profile.t2
        slots = [atom for var in universals for atom in _slots_for(var, s1, s2)]
        slots += [atom for var in existentials for atom in _slots_for(var, t1, t2)]
        return _Plan(slots, [3] * _resolve_clauses(config, len(slots)))

    if spec.monotone:
        t = spec.existential_appearances or 1
        slots = [atom for var in existentials for atom in _slots_for(var, t, 0)]
        s = spec.universal_appearances or _uniform_universal_count(config, len(slots))
        slots += [atom for var in universals for atom in _slots_for(var, s, 0)]
        m = _resolve_clauses(config, len(slots))
        if spec.max_one_universal and p * s > m:
            raise GeneratorError(
                f"{p * s} universal appearances cannot spread over {m} clauses",
                suggestion="use fewer universals or more existentials",
            )
        return _Plan(slots, [3] * m)

    raise GeneratorError(f"class {spec.name} is not slot-planned")


# ----------------------------------------------------------------------
# Shuffle and repair
# ----------------------------------------------------------------------


def _chunks(slots: list[Atom], sizes: list[int]) -> list[list[Atom]]:
    out: list[list[Atom]] = []
    start = 0
    for size in sizes:
        out.append(slots[start : start + size])
        start += size
    return out


def _defects(slots: list[Atom], sizes: list[int], spec: ClassSpec, universals: set[int]) -> int:
    score = 0
    pairs: Counter[tuple[int, int]] = Counter()
    for atoms in _chunks(slots, sizes):
        vars_ = [atom.var for atom in atoms if isinstance(atom, Literal)]
        distinct = set(vars_)
        score += len(vars_) - len(distinct)
        if spec.max_one_universal:
            score += max(0, len(distinct & universals) - 1)
        if spec.linear:
            pairs.update(combinations(sorted(distinct), 2))
        if spec.name == "mc-nae2" and all(isinstance(atom, Constant) for atom in atoms):
            score += 1
    return score + sum(count - 1 for count in pairs.values())


def _repair(
    slots: list[Atom], sizes: list[int], spec: ClassSpec, universals: set[int], rng: random.Random
) -> bool:
    current = _defects(slots, sizes, spec, universals)
    for _ in range(REPAIR_ROUNDS_PER_SLOT * len(slots)):
        if current == 0:
            return True
        i, j = rng.randrange(len(slots)), rng.randrange(len(slots))
        slots[i], slots[j] = slots[j], slots[i]
        score = _defects(slots, sizes, spec, universals)
        if score <= current:
            current = score
        else:
            slots[i], slots[j] = slots[j], slots[i]
    return current == 0


def _free_matrix(config: GeneratorConfig, spec: ClassSpec, rng: random.Random) -> list[Clause]:
    variables = list(range(1, config.universals + config.existentials + 1))
    m = config.clauses if config.clauses is not None else 2 * len(variables)
    if m and not variables:
        raise GeneratorError("clauses need variables", suggestion="use existentials>=1")
    fixed = min(spec.clause_sizes) if spec.clause_sizes and len(spec.clause_sizes) == 1 else None
    if fixed is not None and len(variables) < fixed:
        raise GeneratorError(f"class {spec.name} needs {fixed} variables", suggestion=f"use at least {fixed} variables")
    semantics = _semantics(spec, config)
    smallest = 2 if semantics is Semantics.NAE else 1
    matrix: list[Clause] = []
    for _ in range(m):
        size = fixed or rng.randint(smallest, min(3, max(smallest, len(variables))))
        chosen = rng.sample(variables, min(size, len(variables)))
        matrix.append(Clause(tuple(Literal(var, rng.random() < 0.5) for var in chosen)))
    return matrix


def _semantics(spec: ClassSpec, config: GeneratorConfig) -> Semantics:
    if spec.semantics is not None:
        if config.semantics is not None and config.semantics is not spec.semantics:
            raise GeneratorError(
                f"class {spec.name} has {spec.semantics.value} semantics",
                suggestion=f"use semantics={spec.semantics.value}",
            )
        return spec.semantics
    return config.semantics or Semantics.SAT


def generate_instance(config: GeneratorConfig) -> QuantifiedFormula:
    """Sample a formula of ``config.class_name`` with the requested counts.

    Raises:
        NotFoundError: If the class is not registered.
        GeneratorError: If the counts are impossible or every attempt fails.
    """
    spec = get_class_spec(config.class_name)
    semantics = _semantics(spec, config)
    rng = random.Random(config.seed)
    attempts = config.max_attempts or get_config().generator_attempts
    universals = tuple(range(1, config.universals + 1))
    existentials = tuple(range(config.universals + 1, config.universals + config.existentials + 1))

    slot_planned = spec.profile is not None or spec.monotone
    plan = _plan(spec, config) if slot_planned else None
    for attempt in range(1, attempts + 1):
        if plan is None:
            matrix = _free_matrix(config, spec, rng)
        else:
            slots = list(plan.slots)
            rng.shuffle(slots)
            if not _repair(slots, plan.sizes, spec, set(universals), rng):
                continue
            matrix = [Clause(tuple(atoms)) for atoms in _chunks(slots, plan.sizes)]
        formula = QuantifiedFormula(
            universals=universals,
            existentials=existentials,
            matrix=tuple(matrix),
            semantics=semantics,
            constants_allowed=spec.name == "mc-nae2",
        )
        if validate_class(formula, spec).passed:
            logger.debug("Generated %s instance on attempt %d", spec.name, attempt)
            return formula

    raise GeneratorError(
        f"no {spec.name} instance found in {attempts} attempts",
        suggestion="try fewer clauses, more variables or a larger max_attempts",
    )
