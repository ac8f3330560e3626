"""Exception hierarchy for qbforge.

Every error derives from QbforgeError and serializes through to_dict(),
which the CLI prints for --format json.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from qbforge.validation import ClassReport


class QbforgeError(Exception):
    """Base exception for all qbforge errors.

    All qbforge-specific exceptions should inherit from this class.
    """

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "details": self.details,
        }


class FormulaError(QbforgeError):
    """Exception for malformed formulas or invalid formula operations.

    Raised when:
    - A clause has more than three atoms
    - A constant appears outside a constants-allowed formula
    - Quantifier blocks overlap or miss a matrix variable
    - An assignment does not cover the variables being evaluated
    """

    def __init__(self, message: str, field: str | None = None, value: Any = None):
        details: dict[str, Any] = {}
        if field:
            details["field"] = field
        if value is not None:
            details["value"] = str(value)
        super().__init__(message, details)
        self.field = field
        self.value = value


class ConfigError(QbforgeError):
    """Exception for configuration errors.

    Raised when:
    - A budget or limit is not positive
    - An environment override cannot be used
    """

    def __init__(self, message: str, missing_vars: list[str] | None = None):
        details: dict[str, Any] = {}
        if missing_vars:
            details["missing_vars"] = missing_vars
        super().__init__(message, details)
        self.missing_vars = missing_vars or []


class NotFoundError(QbforgeError):
    """Exception for unknown variables, gadgets, routes, classes or deciders."""

    def __init__(self, resource_type: str, resource_id: str):
        message = f"{resource_type} not found: {resource_id}"
        details = {
            "resource_type": resource_type,
            "resource_id": resource_id,
        }
        super().__init__(message, details)
        self.resource_type = resource_type
        self.resource_id = resource_id


class ConflictError(QbforgeError):
    """Exception for conflicting declarations.

    Raised when:
    - A substitution names the same source variable twice
    - A variable is declared in both quantifier blocks
    """

    def __init__(self, message: str, existing_id: str | None = None):
        details: dict[str, Any] = {}
        if existing_id:
            details["existing_id"] = existing_id
        super().__init__(message, details)
        self.existing_id = existing_id


class ParseError(QbforgeError):
    """Exception for QEXT / QDIMACS input that cannot be read.

    The message always starts with the 1-based line and column of the
    offending token.
    """

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}", {"line": line, "column": column})
        self.line = line
        self.column = column
        self.reason = message


class BudgetExceededError(QbforgeError):
    """Exception raised when the oracle runs past its evaluation budget."""

    def __init__(self, limit: int, used: int):
        super().__init__(
            f"evaluation budget exceeded ({used} > {limit})",
            {"limit": limit, "used": used},
        )
        self.limit = limit
        self.used = used


class AllocatorExhaustedError(QbforgeError):
    """Exception raised when a bounded VariableAllocator runs out of ids."""

    def __init__(self, limit: int):
        super().__init__(f"variable allocator exhausted at id {limit}", {"limit": limit})
        self.limit = limit


class ReductionError(QbforgeError):
    """Exception for reduction precondition failures.

    Raised when:
    - The source formula has the wrong semantics for a route
    - A variable violates a route's occurrence precondition
    - Balancing arithmetic does not divide evenly
    """

    def __init__(self, message: str, route: str | None = None, variable: int | None = None):
        details: dict[str, Any] = {}
        if route:
            details["route"] = route
        if variable is not None:
            details["variable"] = variable
        super().__init__(message, details)
        self.route = route
        self.variable = variable


class ClassViolationError(ReductionError):
    """Exception raised when a formula fails a required class check."""

    def __init__(self, report: ClassReport, route: str | None = None):
        failure = report.first_failure
        reason = f"{failure.name}: {failure.detail}" if failure else "unknown"
        super().__init__(f"formula is not in class {report.class_name} ({reason})", route=route)
        self.details["class"] = report.class_name
        self.report = report


class GeneratorError(QbforgeError):
    """Exception raised when a random instance cannot be produced."""

    def __init__(self, message: str, suggestion: str | None = None):
        details: dict[str, Any] = {}
        if suggestion:
            details["suggestion"] = suggestion
        super().__init__(message if not suggestion else f"{message}; {suggestion}", details)
        self.suggestion = suggestion
