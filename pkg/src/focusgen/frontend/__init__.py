"""Textual frontends: the .afm DSL, the JSON interchange format, printing."""

from ..diagnostics import Diagnostic, SourceSpan
from .interchange import parse_interchange
from .parser import ParseError, parse_dsl
from .printer import format_expr, format_value, print_dsl

__all__ = [
    "Diagnostic",
    "ParseError",
    "SourceSpan",
    "format_expr",
    "format_value",
    "parse_dsl",
    "parse_interchange",
    "print_dsl",
]
