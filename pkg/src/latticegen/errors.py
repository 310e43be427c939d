"""Shared error types.

Every engine-level failure carries a short machine-readable code (the same
codes that appear in validation reports and CLI/JSON output) plus a human
message.
"""

from __future__ import annotations


class LatticeError(Exception):
    """Base error with a stable code string."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class SyntaxProblem(LatticeError):
    """Parse failure with a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__("SYNTAX-ERROR", f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
