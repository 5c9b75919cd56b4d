"""Catalog of the specification operators and their renderings.

Every formula connective and stream accessor routes through exactly one
entry here; emitters never hard-code a symbol. Each entry carries the
LaTeX macro plus two plain-text forms (unicode and ASCII), selectable
per document.
"""

from __future__ import annotations

from dataclasses import dataclass

STREAM = "stream"
TEMPORAL = "temporal"
LOGICAL = "logical"
ARITHMETIC = "arithmetic"


@dataclass(frozen=True)
class OperatorCatalogEntry:
    kind: str  # stable lookup key used by the emitters
    symbol: str  # canonical display symbol
    arity: int
    category: str
    latex: str
    text: str  # unicode plain-text form
    ascii: str  # ASCII plain-text form


CATALOG: tuple[OperatorCatalogEntry, ...] = (
    OperatorCatalogEntry("and", "∧", 2, LOGICAL, r"\fand", "∧", "/\\"),
    OperatorCatalogEntry("or", "∨", 2, LOGICAL, r"\forop", "∨", "\\/"),
    OperatorCatalogEntry("not", "¬", 1, LOGICAL, r"\fnot", "¬", "~"),
    OperatorCatalogEntry("implies", "→", 2, LOGICAL, r"\fimplies", "→", "->"),
    OperatorCatalogEntry("eq", "=", 2, LOGICAL, "=", "=", "="),
    OperatorCatalogEntry("neq", "≠", 2, LOGICAL, r"\fneq", "≠", "!="),
    OperatorCatalogEntry("lt", "<", 2, LOGICAL, "<", "<", "<"),
    OperatorCatalogEntry("le", "≤", 2, LOGICAL, r"\fleq", "≤", "<="),
    OperatorCatalogEntry("plus", "+", 2, ARITHMETIC, "+", "+", "+"),
    OperatorCatalogEntry("minus", "-", 2, ARITHMETIC, "-", "-", "-"),
    OperatorCatalogEntry("eps", "ε", 0, STREAM, r"\feps", "ε", "eps"),
    OperatorCatalogEntry("true", "true", 0, LOGICAL, r"\fname{true}", "true", "true"),
    OperatorCatalogEntry("false", "false", 0, LOGICAL, r"\fname{false}", "false", "false"),
    OperatorCatalogEntry("at", "(t)", 1, STREAM, "(t)", "(t)", "(t)"),
    OperatorCatalogEntry("next", "(t+1)", 1, TEMPORAL, "(t+1)", "(t+1)", "(t+1)"),
    OperatorCatalogEntry("at0", "(0)", 1, TEMPORAL, "(0)", "(0)", "(0)"),
)

BY_KIND: dict[str, OperatorCatalogEntry] = {e.kind: e for e in CATALOG}

# Model-expression operator spellings map onto catalog kinds.
OP_KIND = {
    "&&": "and",
    "||": "or",
    "!": "not",
    "=": "eq",
    "!=": "neq",
    "<": "lt",
    "<=": "le",
    "+": "plus",
    "-": "minus",
}


def entry(kind: str) -> OperatorCatalogEntry:
    return BY_KIND[kind]


def operators_markdown() -> str:
    """The operator reference shipped as docs/operators.md."""
    lines = [
        "# Specification operators",
        "",
        "Generated from the operator catalog; regenerate with `focusgen operators`.",
        "",
        "| symbol | arity | category | LaTeX | text | ASCII |",
        "|--------|-------|----------|-------|------|-------|",
    ]
    for e in CATALOG:
        latex = e.latex.replace("\\", "\\\\")
        ascii_form = e.ascii.replace("\\", "\\\\")
        lines.append(f"| {e.symbol} | {e.arity} | {e.category} | `{latex}` | {e.text} | `{ascii_form}` |")
    return "\n".join(lines) + "\n"
