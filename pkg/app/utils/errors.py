"""Exception hierarchy shared by the algebra modules, the CLI and the HTTP surface"""

from typing import Optional, Dict, Any
from datetime import datetime


class ToolkitException(Exception):
    """Base exception class for all toolkit errors"""

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        status_code: Optional[int] = None
    ):
        self.message = message
        self.code = code or self.__class__.__name__.upper()
        self.details = details or {}
        self.status_code = status_code or 500
        self.timestamp = datetime.now()

        self.details["exception_type"] = self.__class__.__name__
        self.details["timestamp"] = self.timestamp.isoformat()

        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for API responses and records output"""
        return {
            "message": self.message,
            "code": self.code,
            "details": self.details
        }


class ValidationError(ToolkitException):
    """Input validation errors"""

    def __init__(self, message: str, field_errors: Optional[Dict[str, str]] = None):
        details = {"field_errors": field_errors or {}}
        super().__init__(message, "VALIDATION_ERROR", details, status_code=400)


class ParseError(ToolkitException):
    """Malformed text in one of the input grammars"""

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        line: int = 1,
        column: int = 1
    ):
        self.reason = message
        self.source = source
        self.line = line
        self.column = column
        details = {"source": source, "line": line, "column": column}
        location = f"line {line}, column {column}"
        if source:
            location = f"{source}: {location}"
        super().__init__(f"{location}: {message}", "PARSE_ERROR", details, status_code=400)

    def relocate(self, source: Optional[str] = None, line: Optional[int] = None, column_offset: int = 0) -> "ParseError":
        """Return the same diagnostic placed inside a larger document"""
        return ParseError(
            self.reason,
            source=source or self.source,
            line=line or self.line,
            column=self.column + column_offset,
        )


class RankMismatchError(ToolkitException):
    """Vectors of different ranks were combined"""

    def __init__(self, expected: int, actual: int, context: Optional[str] = None):
        details = {"expected": expected, "actual": actual, "context": context}
        msg = f"Rank mismatch: expected {expected}, got {actual}"
        if context:
            msg = f"{msg} ({context})"
        super().__init__(msg, "RANK_MISMATCH", details, status_code=400)


class PresentationMismatchError(ToolkitException):
    """Elements from different module presentations were combined"""

    def __init__(self, message: str = "Elements belong to different presentations"):
        super().__init__(message, "PRESENTATION_MISMATCH", {}, status_code=400)


class NotDivisibleError(ToolkitException):
    """A required Laurent polynomial division is not exact"""

    def __init__(self, divisor: str, dividend: str):
        details = {"divisor": divisor, "dividend": dividend}
        super().__init__(f"{divisor} does not divide {dividend}", "NOT_DIVISIBLE", details, status_code=422)


class UnassignedVariableError(ToolkitException):
    """A word mentions a variable with no assigned group element"""

    def __init__(self, variable: str):
        details = {"variable": variable}
        super().__init__(f"Variable '{variable}' is not assigned", "UNASSIGNED_VARIABLE", details, status_code=400)


class ArityError(ToolkitException):
    """Assignment length does not match the number of variables"""

    def __init__(self, expected: int, actual: int):
        details = {"expected": expected, "actual": actual}
        super().__init__(
            f"Expected {expected} values, got {actual}", "ARITY_MISMATCH", details, status_code=400
        )


class GadgetError(ToolkitException):
    """Malformed equation chains or divisibility systems"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "GADGET_ERROR", details, status_code=400)


class ResourceBudgetExceeded(ToolkitException):
    """A computation ran past its configured step budget"""

    def __init__(self, budget: int, steps: int, operation: str = "groebner"):
        details = {"budget": budget, "steps": steps, "operation": operation}
        super().__init__(
            f"Step budget of {budget} exhausted during {operation}",
            "RESOURCE_BUDGET_EXCEEDED",
            details,
            status_code=422
        )


class ConfigurationError(ToolkitException):
    """Configuration or setup errors"""

    def __init__(self, message: str, config_key: Optional[str] = None):
        details = {"config_key": config_key} if config_key else {}
        super().__init__(message, "CONFIGURATION_ERROR", details, status_code=500)


EXIT_PARSE_ERROR = 3
EXIT_BUDGET_EXCEEDED = 4


def exit_code_for(exc: ToolkitException) -> int:
    """CLI exit code for a toolkit exception"""
    if isinstance(exc, ResourceBudgetExceeded):
        return EXIT_BUDGET_EXCEEDED
    return EXIT_PARSE_ERROR
