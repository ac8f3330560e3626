"""QEXT and QDIMACS reading and writing.

QEXT is line oriented:

    p qext <nvars> <nclauses> <sat|nae> [mc]
    c free-form comment
    a 1 2 0
    e 3 4 0
    1 -3 T 0

``a``/``e`` lines declare the ∀ and ∃ blocks, clause lines are
0-terminated lists of signed ids and the constants ``T``/``F`` (NAE files
only; ``mc`` marks them and is inferred when a constant shows up). QDIMACS
(``p cnf``) input is detected automatically and read with SAT semantics.

Usage:
    from qbforge.qext import parse_qext, serialize_qext

    formula = parse_qext(path.read_text())
    text = serialize_qext(formula)
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path

from qbforge.exceptions import ConflictError, FormulaError, ParseError
from qbforge.formula import MAX_CLAUSE_LENGTH, Atom, Clause, Constant, Literal, QuantifiedFormula, Semantics

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class QextDocument:
    """A parsed file: the formula plus what serialization should reproduce."""

    formula: QuantifiedFormula
    comments: tuple[str, ...] = ()
    nvars: int = 0
    source_format: str = "qext"

    @property
    def nclauses(self) -> int:
        return len(self.formula.matrix)


@dataclass
class _Token:
    text: str
    line: int
    column: int


@dataclass
class _Builder:
    """Mutable parse state shared by the QEXT and QDIMACS readers."""

    universals: list[int] = field(default_factory=list)
    existentials: list[int] = field(default_factory=list)
    clauses: list[Clause] = field(default_factory=list)
    clause_lines: list[int] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)
    declared: set[int] = field(default_factory=set)
    seen_clause: bool = False


def _tokens(line: str, number: int) -> list[_Token]:
    return [_Token(m.group(), number, m.start() + 1) for m in _TOKEN.finditer(line)]


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        yield number, raw.rstrip()


def _int(token: _Token, what: str) -> int:
    try:
        return int(token.text)
    except ValueError:
        raise ParseError(f"expected {what}, got {token.text!r}", token.line, token.column) from None


def _terminated(tokens: list[_Token], line: int, what: str) -> list[_Token]:
    if not tokens or tokens[-1].text != "0":
        column = tokens[-1].column + len(tokens[-1].text) if tokens else 1
        raise ParseError(f"{what} must end with 0", line, column)
    body = tokens[:-1]
    for token in body:
        if token.text == "0":
            raise ParseError(f"unexpected 0 inside {what}", token.line, token.column)
    return body


def _declare(builder: _Builder, tokens: list[_Token], block: str, nvars: int) -> None:
    if builder.seen_clause:
        raise ParseError("quantifier lines must precede clauses", tokens[0].line, tokens[0].column)
    if block == "a" and builder.existentials:
        raise ParseError("an 'a' block after an 'e' block is not a ∀∃ prefix", tokens[0].line, tokens[0].column)
    target = builder.universals if block == "a" else builder.existentials
    for token in _terminated(tokens[1:], tokens[0].line, f"'{block}' line"):
        var = _int(token, "a variable id")
        if var <= 0:
            raise ParseError(f"variable ids must be positive, got {var}", token.line, token.column)
        if nvars and var > nvars:
            raise ParseError(f"variable {var} exceeds the header count {nvars}", token.line, token.column)
        if var in builder.declared:
            raise ParseError(f"variable {var} declared twice", token.line, token.column)
        builder.declared.add(var)
        target.append(var)


def _atom(token: _Token, allow_constants: bool) -> Atom:
    if token.text in ("T", "F"):
        if not allow_constants:
            raise ParseError(f"constant {token.text} is only allowed in nae files", token.line, token.column)
        return Constant(token.text)
    value = _int(token, "a literal")
    return Literal.from_int(value)


def _clause(tokens: list[_Token], line: int, allow_constants: bool) -> Clause:
    body = _terminated(tokens, line, "clause")
    if not body:
        raise ParseError("empty clause", line, tokens[0].column)
    if len(body) > MAX_CLAUSE_LENGTH:
        raise ParseError(
            f"clause has {len(body)} atoms, at most {MAX_CLAUSE_LENGTH} allowed", line, body[MAX_CLAUSE_LENGTH].column
        )
    return Clause(tuple(_atom(token, allow_constants) for token in body))


def _build(builder: _Builder, semantics: Semantics, mc: bool, header_line: int) -> QuantifiedFormula:
    try:
        return QuantifiedFormula(
            universals=tuple(builder.universals),
            existentials=tuple(builder.existentials),
            matrix=tuple(builder.clauses),
            semantics=semantics,
            constants_allowed=mc,
        )
    except (FormulaError, ConflictError) as e:
        raise ParseError(e.message, header_line) from e


def _check_undeclared(builder: _Builder, tokens_by_clause: list[list[_Token]]) -> None:
    for tokens in tokens_by_clause:
        for token in tokens:
            if token.text in ("T", "F", "0"):
                continue
            var = abs(int(token.text))
            if var not in builder.declared:
                raise ParseError(f"variable {var} is not declared", token.line, token.column)


# ----------------------------------------------------------------------
# QEXT
# ----------------------------------------------------------------------


def _parse_header(tokens: list[_Token]) -> tuple[int, int, Semantics, bool]:
    line = tokens[0].line
    if len(tokens) < 5 or len(tokens) > 6 or tokens[1].text != "qext":
        raise ParseError("header must be 'p qext <nvars> <nclauses> <sat|nae> [mc]'", line, tokens[0].column)
    nvars = _int(tokens[2], "a variable count")
    nclauses = _int(tokens[3], "a clause count")
    for token, value in ((tokens[2], nvars), (tokens[3], nclauses)):
        if value < 0:
            raise ParseError("header counts must not be negative", line, token.column)
    try:
        semantics = Semantics(tokens[4].text)
    except ValueError:
        raise ParseError(f"unknown semantics {tokens[4].text!r}", line, tokens[4].column) from None
    mc = False
    if len(tokens) == 6:
        if tokens[5].text != "mc":
            raise ParseError(f"unexpected header token {tokens[5].text!r}", line, tokens[5].column)
        mc = True
    return nvars, nclauses, semantics, mc


def parse_document(text: str) -> QextDocument:
    """Parse QEXT (or QDIMACS) text, keeping comments.

    Raises:
        ParseError: On any syntax or declaration error, located by line and column.
    """
    if _detect_format(text) == "qdimacs":
        return _parse_qdimacs_document(text)

    builder = _Builder()
    header: tuple[int, int, Semantics, bool] | None = None
    header_line = 1
    clause_tokens: list[list[_Token]] = []
    for number, line in _lines(text):
        tokens = _tokens(line, number)
        if not tokens:
            continue
        head = tokens[0].text
        if head == "c":
            builder.comments.append(line.strip()[1:].strip())
            continue
        if head == "p":
            if header is not None:
                raise ParseError("duplicate header", number, tokens[0].column)
            header = _parse_header(tokens)
            header_line = number
            continue
        if header is None:
            raise ParseError("missing 'p qext' header", number, tokens[0].column)
        nvars, _, semantics, _ = header
        if head in ("a", "e"):
            _declare(builder, tokens, head, nvars)
            continue
        builder.seen_clause = True
        clause = _clause(tokens, number, semantics is Semantics.NAE)
        clause_tokens.append(tokens)
        builder.clauses.append(clause)
        builder.clause_lines.append(number)

    if header is None:
        raise ParseError("missing 'p qext' header", 1)
    nvars, nclauses, semantics, mc = header
    _check_undeclared(builder, clause_tokens)
    if len(builder.clauses) != nclauses:
        last = builder.clause_lines[-1] if builder.clause_lines else header_line
        raise ParseError(f"header announces {nclauses} clauses, found {len(builder.clauses)}", last)
    has_constants = any(clause.constants for clause in builder.clauses)
    if has_constants and not mc:
        logger.debug("Inferring constants-allowed formula from clause constants")
    mc = mc or has_constants
    if mc and semantics is not Semantics.NAE:
        raise ParseError("the mc flag needs nae semantics", header_line)
    if mc and builder.universals:
        raise ParseError("formulas with constants cannot declare universals", header_line)

    formula = _build(builder, semantics, mc, header_line)
    if formula.max_variable > nvars:
        raise ParseError(f"variable {formula.max_variable} exceeds the header count {nvars}", header_line)
    return QextDocument(formula, tuple(builder.comments), nvars, "qext")


def parse_qext(text: str) -> QuantifiedFormula:
    """Parse QEXT text (QDIMACS is detected and accepted too)."""
    return parse_document(text).formula


def _block_line(tag: str, block: tuple[int, ...]) -> str:
    return f"{tag} " + " ".join(str(v) for v in block) + " 0"


def _clause_line(clause: Clause) -> str:
    return " ".join(str(atom) for atom in clause.atoms) + " 0"


def serialize_document(document: QextDocument) -> str:
    """Canonical QEXT text: header, comments, 'a', 'e', clauses in matrix order."""
    formula = document.formula
    nvars = max(document.nvars, formula.max_variable)
    header = f"p qext {nvars} {len(formula.matrix)} {formula.semantics.value}"
    if formula.constants_allowed:
        header += " mc"
    lines = [header]
    lines.extend(f"c {comment}" if comment else "c" for comment in document.comments)
    if formula.universals:
        lines.append(_block_line("a", formula.universals))
    if formula.existentials:
        lines.append(_block_line("e", formula.existentials))
    lines.extend(_clause_line(clause) for clause in formula.matrix)
    return "\n".join(lines) + "\n"


def serialize_qext(formula: QuantifiedFormula, comments: tuple[str, ...] = ()) -> str:
    return serialize_document(QextDocument(formula, comments, formula.max_variable))


# ----------------------------------------------------------------------
# QDIMACS
# ----------------------------------------------------------------------


def _detect_format(text: str) -> str:
    for _, line in _lines(text):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p" and len(tokens) > 1 and tokens[1] == "cnf":
            return "qdimacs"
        return "qext"
    return "qext"


def _parse_qdimacs_document(text: str) -> QextDocument:
    builder = _Builder()
    header: tuple[int, int] | None = None
    header_line = 1
    clause_tokens: list[list[_Token]] = []
    for number, line in _lines(text):
        tokens = _tokens(line, number)
        if not tokens:
            continue
        head = tokens[0].text
        if head == "c":
            builder.comments.append(line.strip()[1:].strip())
            continue
        if head == "p":
            if header is not None:
                raise ParseError("duplicate header", number, tokens[0].column)
            if len(tokens) != 4 or tokens[1].text != "cnf":
                raise ParseError("header must be 'p cnf <nvars> <nclauses>'", number, tokens[0].column)
            header = (_int(tokens[2], "a variable count"), _int(tokens[3], "a clause count"))
            header_line = number
            continue
        if header is None:
            raise ParseError("missing 'p cnf' header", number, tokens[0].column)
        if head in ("a", "e"):
            _declare(builder, tokens, head, header[0])
            continue
        builder.seen_clause = True
        clause_tokens.append(tokens)
        builder.clauses.append(_clause(tokens, number, allow_constants=False))
        builder.clause_lines.append(number)

    if header is None:
        raise ParseError("missing 'p cnf' header", 1)
    nvars, nclauses = header
    if len(builder.clauses) != nclauses:
        last = builder.clause_lines[-1] if builder.clause_lines else header_line
        raise ParseError(f"header announces {nclauses} clauses, found {len(builder.clauses)}", last)

    free = sorted({lit.var for clause in builder.clauses for lit in clause.literals} - builder.declared)
    if free:
        if builder.universals:
            _check_undeclared(builder, clause_tokens)
        logger.debug("Treating free variables %s as existential", free)
        builder.existentials.extend(free)
        builder.declared.update(free)
    for tokens in clause_tokens:
        for token in tokens[:-1]:
            var = abs(int(token.text))
            if var > nvars:
                raise ParseError(f"variable {var} exceeds the header count {nvars}", token.line, token.column)
    return QextDocument(_build(builder, Semantics.SAT, False, header_line), tuple(builder.comments), nvars, "qdimacs")


def parse_qdimacs(text: str) -> QuantifiedFormula:
    """Parse QDIMACS; free variables are existential only when there are no universals."""
    if _detect_format(text) != "qdimacs":
        raise ParseError("missing 'p cnf' header", 1)
    return _parse_qdimacs_document(text).formula


def export_qdimacs(formula: QuantifiedFormula) -> str:
    """Standard QDIMACS for a SAT formula without constants.

    Raises:
        FormulaError: On NAE semantics or constants.
    """
    if formula.semantics is not Semantics.SAT:
        raise FormulaError("QDIMACS export needs SAT semantics", field="semantics", value=formula.semantics.value)
    if formula.constants_allowed or any(clause.constants for clause in formula.matrix):
        raise FormulaError("QDIMACS cannot express constants", field="matrix")
    lines = [f"p cnf {formula.max_variable} {len(formula.matrix)}"]
    if formula.universals:
        lines.append(_block_line("a", formula.universals))
    if formula.existentials:
        lines.append(_block_line("e", formula.existentials))
    lines.extend(_clause_line(clause) for clause in formula.matrix)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Files
# ----------------------------------------------------------------------


def read_document(path: str | Path) -> QextDocument:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        column = e.start - data.rfind(b"\n", 0, e.start)
        raise ParseError(f"invalid UTF-8 byte 0x{data[e.start]:02x}", line, column) from None
    return parse_document(text)


def read_formula(path: str | Path) -> QuantifiedFormula:
    return read_document(path).formula


def write_formula(path: str | Path, formula: QuantifiedFormula, comments: tuple[str, ...] = ()) -> Path:
    target = Path(path)
    target.write_text(serialize_qext(formula, comments))
    logger.info("Wrote %d clauses to %s", len(formula.matrix), target)
    return target
