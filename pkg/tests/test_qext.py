"""Tests for qbforge.qext (QEXT and QDIMACS reading and writing)."""

import logging

import pytest

from qbforge.exceptions import FormulaError, ParseError
from qbforge.formula import Clause, QuantifiedFormula, Semantics
from qbforge.gadgets import build_gadget
from qbforge.qext import (
    export_qdimacs,
    parse_document,
    parse_qdimacs,
    parse_qext,
    read_document,
    read_formula,
    serialize_document,
    serialize_qext,
    write_formula,
)


class TestSerialize:
    def test_q1_gadget(self, fixtures_dir):
        text = serialize_qext(build_gadget("Q1").as_formula())
        lines = text.splitlines()
        assert lines[0] == "p qext 9 12 sat"
        assert lines[1].split()[1:-1] == ["1", "2", "3", "4", "5"]
        assert lines[2].split()[1:-1] == ["6", "7", "8", "9"]
        assert len(lines) == 3 + 12
        assert text == (fixtures_dir / "q1.qext").read_text()

    def test_empty_formula(self):
        assert serialize_qext(QuantifiedFormula()) == "p qext 0 0 sat\n"

    def test_constants_and_flag(self):
        formula = QuantifiedFormula(
            existentials=(1, 2), matrix=(Clause.of(1, 2, "T"),), semantics=Semantics.NAE, constants_allowed=True
        )
        assert serialize_qext(formula, ("odd cycle",)) == "p qext 2 1 nae mc\nc odd cycle\ne 1 2 0\n1 2 T 0\n"

    @pytest.mark.parametrize("name", ["q1.qext", "tiny-nae.qext", "no-nae.qext"])
    def test_golden_files_are_canonical(self, fixtures_dir, name):
        text = (fixtures_dir / name).read_text()
        assert serialize_document(parse_document(text)) == text


class TestParse:
    def test_tiny_nae(self, fixtures_dir, tiny_nae):
        document = read_document(fixtures_dir / "tiny-nae.qext")
        assert document.formula == tiny_nae
        assert document.comments == ("forall x1 exists x2 x3, a yes-instance",)
        assert document.nclauses == 2
        assert document.source_format == "qext"

    def test_blank_lines_and_trailing_space(self):
        formula = parse_qext("\np qext 2 1 sat   \n\ne 1 2 0\n  1 -2 0  \n")
        assert formula.matrix == (Clause.of(1, -2),)

    def test_header_count_may_exceed_used_variables(self):
        document = parse_document("p qext 7 1 sat\ne 1 2 0\n1 2 0\n")
        assert document.nvars == 7
        assert serialize_document(document).startswith("p qext 7 1 sat")

    def test_mc_flag_inferred(self, fixtures_dir, caplog):
        with caplog.at_level(logging.DEBUG, logger="qbforge.qext"):
            formula = read_formula(fixtures_dir / "mc-cycle.qext")
        assert formula.constants_allowed
        assert formula.semantics is Semantics.NAE
        assert "Inferring constants-allowed" in caplog.text
        assert serialize_qext(formula).startswith("p qext 3 3 nae mc\n")

    def test_mc_flag_without_constants(self):
        formula = parse_qext("p qext 2 1 nae mc\ne 1 2 0\n1 2 0\n")
        assert formula.constants_allowed


class TestMalformed:
    @pytest.mark.parametrize(
        "name, line, column, message",
        [
            ("missing-header.qext", 1, 1, "missing 'p qext' header"),
            ("unterminated.qext", 3, 4, "clause must end with 0"),
            ("undeclared.qext", 3, 5, "variable 3 is not declared"),
            ("count-mismatch.qext", 3, 1, "header announces 2 clauses, found 1"),
            ("constant-in-sat.qext", 3, 3, "constant T is only allowed in nae files"),
            ("late-universal.qext", 3, 1, "an 'a' block after an 'e' block"),
            ("duplicate.qext", 3, 3, "variable 1 declared twice"),
            ("bad-semantics.qext", 1, 12, "unknown semantics 'xor'"),
            ("long-clause.qext", 3, 7, "clause has 4 atoms, at most 3 allowed"),
            ("exceeds-header.qext", 2, 5, "variable 3 exceeds the header count 2"),
            ("mc-universals.qext", 1, 1, "formulas with constants cannot declare universals"),
            ("mc-sat.qext", 1, 1, "the mc flag needs nae semantics"),
            ("zero-inside.qext", 2, 5, "unexpected 0 inside 'e' line"),
            ("empty-clause.qext", 3, 1, "empty clause"),
            ("invalid-utf8.qext", 3, 3, "invalid UTF-8 byte 0xff"),
        ],
    )
    def test_located_errors(self, fixtures_dir, name, line, column, message):
        with pytest.raises(ParseError) as info:
            read_formula(fixtures_dir / "malformed" / name)
        error = info.value
        assert (error.line, error.column) == (line, column)
        assert error.reason.startswith(message)
        assert error.message.startswith(f"line {line}, column {column}: ")
        assert error.to_dict()["details"] == {"line": line, "column": column}

    def test_bad_header_shape(self):
        with pytest.raises(ParseError, match="header must be"):
            parse_qext("p qext 2 sat\n")

    def test_negative_count(self):
        with pytest.raises(ParseError, match="must not be negative"):
            parse_qext("p qext 2 -1 sat\n")

    def test_non_integer_literal(self):
        with pytest.raises(ParseError, match="expected a literal, got 'x'") as info:
            parse_qext("p qext 2 1 sat\ne 1 2 0\n1 x 0\n")
        assert info.value.column == 3

    def test_duplicate_header(self):
        with pytest.raises(ParseError, match="duplicate header"):
            parse_qext("p qext 1 0 sat\np qext 1 0 sat\n")

    def test_quantifier_after_clause(self):
        with pytest.raises(ParseError, match="must precede clauses"):
            parse_qext("p qext 2 1 sat\ne 1 0\n1 0\ne 2 0\n")


class TestQdimacs:
    def test_free_variables_become_existential(self, fixtures_dir, sat3_instance):
        document = read_document(fixtures_dir / "sat3.qdimacs")
        assert document.source_format == "qdimacs"
        assert document.formula == sat3_instance

    def test_detected_by_parse_qext(self, fixtures_dir):
        assert parse_qext((fixtures_dir / "sat3.qdimacs").read_text()).semantics is Semantics.SAT

    def test_prefix(self):
        formula = parse_qdimacs("p cnf 3 1\na 1 0\ne 2 3 0\n1 -2 3 0\n")
        assert formula.universals == (1,)
        assert formula.existentials == (2, 3)

    def test_free_variable_with_universals(self):
        with pytest.raises(ParseError, match="variable 3 is not declared"):
            parse_qdimacs("p cnf 3 1\na 1 0\ne 2 0\n1 2 3 0\n")

    def test_rejects_qext_text(self, fixtures_dir):
        with pytest.raises(ParseError, match="missing 'p cnf' header"):
            parse_qdimacs((fixtures_dir / "q1.qext").read_text())

    def test_export(self, fixtures_dir):
        formula = read_formula(fixtures_dir / "q1.qext")
        text = export_qdimacs(formula)
        assert text.splitlines()[:3] == ["p cnf 9 12", "a 1 2 3 4 5 0", "e 6 7 8 9 0"]
        assert parse_qdimacs(text) == formula

    def test_export_rejects_nae(self, tiny_nae):
        with pytest.raises(FormulaError, match="needs SAT semantics"):
            export_qdimacs(tiny_nae)


class TestFiles:
    def test_write_and_read(self, tmp_path, tiny_nae, caplog):
        with caplog.at_level(logging.INFO, logger="qbforge.qext"):
            path = write_formula(tmp_path / "out.qext", tiny_nae, ("copy",))
        assert "Wrote 2 clauses" in caplog.text
        assert read_document(path).comments == ("copy",)
        assert read_formula(path) == tiny_nae

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_formula(tmp_path / "absent.qext")

    def test_invalid_utf8_on_first_line(self, tmp_path):
        path = tmp_path / "latin1.qext"
        path.write_bytes("p qext 1 0 sat c\xe9\n".encode("latin-1"))
        with pytest.raises(ParseError, match="invalid UTF-8 byte 0xe9") as info:
            read_document(path)
        assert (info.value.line, info.value.column) == (1, 17)
