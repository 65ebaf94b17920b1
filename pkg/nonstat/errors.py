"""Exception hierarchy shared by the library and the CLI."""
from __future__ import annotations

from typing import Sequence


class NonstatError(RuntimeError):
    """Base class for every error raised by nonstat."""

    exit_code: int = 1


class UsageError(NonstatError):
    """Raised when the caller supplied an invalid expression, name or spec."""

    exit_code = 2


class DataError(NonstatError):
    """Raised when input samples cannot be ingested."""

    exit_code = 3


class UndefinedStatistic(NonstatError):
    """Raised when a statistic is not defined for the given samples."""

    exit_code = 4


class ExprSyntaxError(UsageError):
    """Raised by the parser; ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, offset: int, expected: str, message: str | None = None) -> None:
        self.offset = offset
        self.expected = expected
        super().__init__(message or f"expected {expected} at offset {offset}")


class UnknownFunction(ExprSyntaxError):
    def __init__(self, name: str, offset: int) -> None:
        self.name = name
        super().__init__(offset, "a known function", f"unknown function '{name}' at offset {offset}")


class UnboundVariable(UsageError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"variable '{name}' is not bound")


class UnknownColumn(UsageError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown column '{name}'")


class InvalidSpec(UsageError):
    """Raised when a Monte Carlo spec violates its invariants."""

    def __init__(self, problems: Sequence[str]) -> None:
        self.problems = list(problems)
        super().__init__("invalid Monte Carlo spec: " + "; ".join(self.problems))


class EmptyInput(DataError):
    def __init__(self) -> None:
        super().__init__("input contains no data rows")


class RaggedRows(DataError):
    def __init__(self, line: int, expected: int, actual: int) -> None:
        self.line = line
        self.expected = expected
        self.actual = actual
        super().__init__(f"line {line}: expected {expected} cells, found {actual}")


class NonNumericCell(DataError):
    def __init__(self, line: int, column: str, token: str) -> None:
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"line {line}, column '{column}': {token!r} is not a decimal number")


class NonFiniteValue(DataError):
    def __init__(self, line: int, column: str) -> None:
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column '{column}': value is not finite")


class DuplicateColumn(DataError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"duplicate column '{name}'")


class InvalidColumnName(DataError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"column name {name!r} is not a valid identifier")


class InsufficientSamples(UndefinedStatistic):
    def __init__(self, required: int, actual: int) -> None:
        self.required = required
        self.actual = actual
        super().__init__(f"need at least {required} samples, got {actual}")


class UndefinedMode(UndefinedStatistic):
    """``column`` names the sample: a column, or an expression when ``subject`` says so."""

    def __init__(self, column: str, subject: str = "column") -> None:
        self.column = column
        self.subject = subject
        super().__init__(f"{subject} '{column}' has no repeated value, mode is undefined")


class NonFiniteResult(UndefinedStatistic):
    """``row`` is ``None`` when the non-finite value came from a substituted evaluation.

    ``quantity`` names a statistic that overflowed the double range instead.
    """

    def __init__(self, row: int | None, quantity: str | None = None) -> None:
        self.row = row
        self.quantity = quantity
        if quantity is not None:
            message = f"{quantity} is outside the double range"
        else:
            where = f"at row {row}" if row is not None else "after substitution"
            message = f"expression evaluated to a non-finite value {where}"
        super().__init__(message)


class InvalidDelimiter(UsageError):
    def __init__(self, delimiter: str) -> None:
        self.delimiter = delimiter
        super().__init__(f"delimiter must be a single character other than a quote or newline, got {delimiter!r}")


class InvalidEncoding(DataError):
    def __init__(self, line: int, position: int) -> None:
        self.line = line
        self.position = position
        super().__init__(f"line {line}: invalid UTF-8 at byte {position}")


class MalformedCsv(DataError):
    def __init__(self, line: int, reason: str) -> None:
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
