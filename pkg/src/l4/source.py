"""Source spans, diagnostics and the toolchain's exception hierarchy."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    @staticmethod
    def point(line: int, col: int) -> "Span":
        return Span(line, col, line, col)

    def merge(self, other: "Span") -> "Span":
        start = min((self.line, self.col), (other.line, other.col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return Span(start[0], start[1], end[0], end[1])


NO_SPAN = Span(0, 0, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    """A located problem report, rendered as ``path:line:col: message``."""

    code: str
    message: str
    span: Span = NO_SPAN
    path: str = "<input>"

    def __str__(self) -> str:
        return f"{self.path}:{self.span.line}:{self.span.col}: {self.message}"


class L4Error(Exception):
    """Base class for every toolchain error."""


class SourceError(L4Error):
    """An error backed by one or more diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


class L4SyntaxError(SourceError):
    """Lexing or parsing failed; ``expected`` lists the acceptable tokens."""

    def __init__(self, diagnostics: list[Diagnostic], expected: frozenset[str] = frozenset()):
        super().__init__(diagnostics)
        self.expected = expected


class SemanticError(SourceError):
    """Normalization failed (duplicate predicates, unknown classes, ...)."""
