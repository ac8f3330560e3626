"""Command-line entry point (``qbforge``).

Exit codes: 0 success or YES, 1 NO (or a failed check), 2 usage, parse or
reduction errors, 3 budget exceeded.

Usage:
    qbforge decide q1.qext --method oracle
    qbforge reduce tiny-nae.qext --route nae-to-b2222 -o out.qext --trace
    qbforge validate out.qext --class b2222
    qbforge gadget verify all --format json
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from qbforge import __version__
from qbforge.config import ForgeSettings, get_config
from qbforge.deciders import decide_poly, match_decider
from qbforge.exceptions import BudgetExceededError, ConfigError, QbforgeError
from qbforge.gadgets import GADGET_CATALOG, build_gadget, verify_catalog
from qbforge.generate import GeneratorConfig, generate_instance
from qbforge.normalize import VerdictNo
from qbforge.oracle import check_equivalence, decide_forall_exists, resolve_budget
from qbforge.pipelines import RouteRunner
from qbforge.qext import read_formula, serialize_qext, write_formula
from qbforge.utils import format_assignment
from qbforge.validation import CLASS_SPECS, validate_class

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3


# ----------------------------------------------------------------------
# Logging
# ----------------------------------------------------------------------


class JsonFormatter(logging.Formatter):
    """One flat JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        payload: dict[str, Any] = {
            "time": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload)


def configure_logging(settings: ForgeSettings | None = None) -> logging.Handler:
    """Install one handler on the ``qbforge`` logger from the settings."""
    options = (settings or get_config()).logging_config
    handler: logging.Handler
    if options["file"]:
        handler = logging.FileHandler(options["file"])
    else:
        handler = logging.StreamHandler(sys.stderr)
    if options["format"] == "json":
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))

    root = logging.getLogger("qbforge")
    for existing in list(root.handlers):
        root.removeHandler(existing)
        existing.close()
    root.addHandler(handler)
    root.setLevel(options["level"] or "WARNING")
    return handler


# ----------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _error(args: argparse.Namespace, error: QbforgeError) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(error.to_dict(), indent=2))
    else:
        print(f"error: {error.message}", file=sys.stderr)


def _elapsed_ms(started: float) -> float:
    return round((time.perf_counter() - started) * 1000, 3)


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    report = validate_class(read_formula(args.file), args.class_name)
    lines = [f"{report.class_name}: {'PASS' if report.passed else 'FAIL'}"]
    for result in report.results:
        detail = f" ({result.detail})" if result.detail else ""
        lines.append(f"  {'ok  ' if result.passed else 'FAIL'} {result.name}{detail}")
    _emit(args, report.to_dict(), "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_NO


def _cmd_decide(args: argparse.Namespace) -> int:
    formula = read_formula(args.file)
    started = time.perf_counter()
    method = args.method
    if method == "auto":
        method = "poly" if match_decider(formula) is not None else "oracle"
        logger.info("Method auto resolved to %s", method)

    if method == "poly":
        verdict = decide_poly(formula)
        text = f"{verdict.answer.value}\n  decider: {verdict.decider}\n  reason: {verdict.reason}"
        if verdict.counterexample is not None:
            text += f"\n  counterexample: {format_assignment(verdict.counterexample)}"
        payload = {"method": "poly", **verdict.to_dict(), "budget": None, "elapsed_ms": _elapsed_ms(started)}
        _emit(args, payload, text)
        return EXIT_OK if verdict.is_yes else EXIT_NO

    result = decide_forall_exists(formula, args.budget)
    text = result.answer.value
    if result.witness is not None:
        text += f"\n  witness: {format_assignment(result.witness)}"
    if result.counterexample is not None:
        text += f"\n  counterexample: {format_assignment(result.counterexample)}"
    text += f"\n  evaluations: {result.evaluations}"
    payload = {
        "method": "oracle",
        **result.to_dict(),
        "budget": resolve_budget(args.budget).max_evaluations,
        "elapsed_ms": _elapsed_ms(started),
    }
    _emit(args, payload, text)
    return EXIT_OK if result.is_yes else EXIT_NO


def _cmd_reduce(args: argparse.Namespace) -> int:
    formula = read_formula(args.file)
    runner = RouteRunner(validate_source=not args.no_validate, validate_target=not args.no_validate)
    outcome = runner.run(args.route, formula)
    if isinstance(outcome, VerdictNo):
        _emit(args, {"route": args.route, "verdict": "NO", "reason": str(outcome)}, str(outcome))
        return EXIT_NO

    comments = (f"route {outcome.route}",)
    if args.output:
        write_formula(args.output, outcome.target, comments)
    payload = outcome.to_dict()
    if args.output is None:
        payload["formula"] = serialize_qext(outcome.target, comments)
    lines = [] if args.output else [serialize_qext(outcome.target, comments).rstrip("\n")]
    if args.trace:
        lines.extend(
            f"c {step.name}: {step.description} (+{step.clauses_added} clauses, +{step.variables_added} variables)"
            for step in outcome.trace
        )
    if args.output:
        lines.append(f"wrote {len(outcome.target.matrix)} clauses to {args.output}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _cmd_check_equiv(args: argparse.Namespace) -> int:
    source, target = read_formula(args.source), read_formula(args.target)
    started = time.perf_counter()
    report = check_equivalence(source, target, args.budget)
    text = (
        f"{'AGREE' if report.agree else 'DISAGREE'}: "
        f"source {report.source_verdict.answer.value}, target {report.target_verdict.answer.value}"
    )
    payload = {
        **report.to_dict(),
        "budget": resolve_budget(args.budget).max_evaluations,
        "elapsed_ms": _elapsed_ms(started),
    }
    _emit(args, payload, text)
    return EXIT_OK if report.agree else EXIT_NO


def _cmd_gadget(args: argparse.Namespace) -> int:
    if args.action == "list":
        rows = []
        for name in GADGET_CATALOG:
            gadget = build_gadget(name)
            rows.append(
                {
                    "name": name,
                    "semantics": gadget.semantics.value,
                    "clauses": len(gadget.clauses),
                    "contract": gadget.contract.description,
                }
            )
        text = "\n".join(f"{r['name']:<10} {r['semantics']:<4} {r['clauses']:>3}  {r['contract']}" for r in rows)
        _emit(args, {"gadgets": rows}, text)
        return EXIT_OK

    names = None if args.name in (None, "all") else [args.name]
    reports = verify_catalog(names, args.budget)
    passed = all(report.passed for report in reports)
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'} {r.gadget} ({r.cases} cases)" for r in reports)
    _emit(args, {"passed": passed, "gadgets": [r.to_dict() for r in reports]}, text)
    return EXIT_OK if passed else EXIT_NO


def _cmd_gen(args: argparse.Namespace) -> int:
    config = GeneratorConfig(
        seed=args.seed,
        universals=args.universals,
        existentials=args.existentials,
        clauses=args.clauses,
        class_name=args.class_name,
        universal_appearances=args.universal_appearances,
    )
    formula = generate_instance(config)
    comments = (f"class {config.class_name} seed {config.seed}",)
    if args.output:
        write_formula(args.output, formula, comments)
        _emit(args, {"output": str(args.output), "clauses": len(formula.matrix)}, f"wrote {args.output}")
    else:
        text = serialize_qext(formula, comments)
        _emit(args, {"formula": text}, text.rstrip("\n"))
    return EXIT_OK


def _cmd_routes(args: argparse.Namespace) -> int:
    runner = RouteRunner()
    routes = runner.plan(args.plan) if args.plan else runner.discover()
    rows = [
        {"name": r.name, "source": r.source_class, "target": r.target_class, "description": r.description}
        for r in routes
    ]
    text = "\n".join(f"{r['name']:<20} {r['source']:>6} -> {r['target']:<8} {r['description']}" for r in rows)
    _emit(args, {"routes": rows}, text)
    return EXIT_OK


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None, help="report format")
    common.add_argument("--budget", type=int, default=None, help="oracle evaluation budget (overrides QBFORGE_BUDGET)")

    parser = argparse.ArgumentParser(prog="qbforge", description="Restricted ∀∃ formula reductions and deciders")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a formula against a class")
    p.add_argument("file", type=Path)
    p.add_argument("--class", dest="class_name", required=True, choices=sorted(CLASS_SPECS))
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("decide", parents=[common], help="decide a formula")
    p.add_argument("file", type=Path)
    p.add_argument("--method", choices=("auto", "poly", "oracle"), default="auto")
    p.set_defaults(handler=_cmd_decide)

    p = sub.add_parser("reduce", parents=[common], help="run a reduction route")
    p.add_argument("file", type=Path)
    p.add_argument("--route", required=True)
    p.add_argument("-o", "--output", type=Path, default=None)
    p.add_argument("--trace", action="store_true", help="print the construction steps")
    p.add_argument("--no-validate", action="store_true", help="skip source and target class checks")
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("check-equiv", parents=[common], help="compare oracle answers of two formulas")
    p.add_argument("source", type=Path)
    p.add_argument("target", type=Path)
    p.set_defaults(handler=_cmd_check_equiv)

    p = sub.add_parser("gadget", parents=[common], help="list or verify gadgets")
    p.add_argument("action", choices=("verify", "list"))
    p.add_argument("name", nargs="?", default=None, help="gadget name or 'all'")
    p.set_defaults(handler=_cmd_gadget)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("--class", dest="class_name", default="nae", choices=sorted(CLASS_SPECS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--universals", type=int, default=0)
    p.add_argument("--existentials", type=int, default=3)
    p.add_argument("--clauses", type=int, default=None)
    p.add_argument("--universal-appearances", type=int, default=None)
    p.add_argument("-o", "--output", type=Path, default=None)
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("routes", parents=[common], help="list reduction routes")
    p.add_argument("--plan", default=None, help="show the steps of one route")
    p.set_defaults(handler=_cmd_routes)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = get_config()
    except ValidationError as e:
        args.format = args.format or "text"
        fields = [str(err["loc"][0]) for err in e.errors() if err["loc"]]
        reasons = "; ".join(str(err["msg"]).removeprefix("Value error, ") for err in e.errors())
        _error(args, ConfigError(f"invalid settings: {reasons}", fields))
        return EXIT_ERROR
    if args.format is None:
        args.format = settings.output_format
    configure_logging(settings)

    try:
        return int(args.handler(args))
    except BudgetExceededError as e:
        _error(args, e)
        return EXIT_BUDGET
    except QbforgeError as e:
        _error(args, e)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
