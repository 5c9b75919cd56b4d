"""Source positions and diagnostics shared by the frontends and checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based (line, column) position with a length, inside one file."""

    file: str
    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """A located finding. Errors block artifact generation, warnings do not."""

    severity: str  # ERROR or WARNING
    span: SourceSpan
    code: str
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def render(self) -> str:
        return f"{self.severity}[{self.code}] {self.span}: {self.message}"


def error(span: SourceSpan, code: str, message: str) -> Diagnostic:
    return Diagnostic(ERROR, span, code, message)


def warning(span: SourceSpan, code: str, message: str) -> Diagnostic:
    return Diagnostic(WARNING, span, code, message)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


def whole_file_span(file: str) -> SourceSpan:
    """Fallback span for findings that have no precise source position."""
    return SourceSpan(file=file, line=1, column=1, length=0)


def span_field() -> SourceSpan | None:
    """Declares an optional node span that stays out of structural equality.

    Printed-and-reparsed models must compare equal to their originals, so
    positions are metadata only.
    """
    return field(default=None, compare=False, repr=False)  # type: ignore[return-value]
