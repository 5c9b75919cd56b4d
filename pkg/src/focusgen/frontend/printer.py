"""Canonical pretty-printer for models; the inverse of parse_dsl.

The output is deterministic and reparses to a structurally equal model.
Declaration order is preserved throughout; nothing is normalized away.
"""

from __future__ import annotations

from ..model import (
    Absent,
    Automaton,
    Binop,
    BoolV,
    Causality,
    Composite,
    Direction,
    EnumV,
    Expr,
    FunctionBehavior,
    IntV,
    Lit,
    LitPattern,
    Model,
    ParentPort,
    Pattern,
    Ref,
    Transition,
    Unop,
    Value,
    WildcardPattern,
)
from ..model.resolve import ResolvedModel

_INDENT = "  "

_PRECEDENCE = {"||": 1, "&&": 2, "=": 3, "!=": 3, "<": 3, "<=": 3, "+": 4, "-": 4}
_UNARY_LEVEL = 5


def print_dsl(model: Model | ResolvedModel) -> str:
    if isinstance(model, ResolvedModel):
        model = model.model
    out: list[str] = [f"model {model.name} {{"]
    for et in model.types:
        out.append(f"{_INDENT}type {et.name} {{ {', '.join(et.literals)} }}")
    for comp in model.components:
        out.append(f"{_INDENT}component {comp.name} ({comp.causality.value}) {{")
        for port in comp.ports:
            decl = f"{_INDENT * 2}{port.direction.value} {port.name}: {port.dtype}"
            if not isinstance(port.init, Absent):
                decl += f" = {format_value(port.init)}"
            out.append(decl)
        _print_body(out, comp.body)
        out.append(f"{_INDENT}}}")
    out.append(f"{_INDENT}root {model.root}")
    out.append("}")
    return "\n".join(out) + "\n"


def _print_body(out: list[str], body: Automaton | FunctionBehavior | Composite) -> None:
    pad = _INDENT * 2
    if isinstance(body, Automaton):
        out.append(f"{pad}automaton {{")
        for var in body.variables:
            out.append(f"{pad}{_INDENT}var {var.name}: {var.dtype} = {format_value(var.init)}")
        for st in body.states:
            marker = "initial state" if st == body.initial else "state"
            out.append(f"{pad}{_INDENT}{marker} {st}")
        for tr in body.transitions:
            out.append(f"{pad}{_INDENT}{_format_transition(tr)}")
        out.append(f"{pad}}}")
    elif isinstance(body, FunctionBehavior):
        if not body.emissions:
            out.append(f"{pad}function {{ }}")
            return
        bindings = ", ".join(f"{name} = {format_expr(expr)}" for name, expr in body.emissions.items())
        out.append(f"{pad}function {{ {bindings} }}")
    else:
        for sub in body.subs:
            out.append(f"{pad}sub {sub.name}: {sub.component}")
        for ch in body.channels:
            src = _format_endpoint(ch.source)
            snk = _format_endpoint(ch.sink)
            out.append(f"{pad}channel {ch.name}: {ch.dtype} {src} -> {snk}")


def _format_endpoint(ep) -> str:
    if isinstance(ep, ParentPort):
        return ep.port
    return f"{ep.instance}.{ep.port}"


def _format_transition(tr: Transition) -> str:
    parts = [f"when {tr.source}"]
    if tr.patterns:
        cells = ", ".join(f"{name} = {_format_pattern(pat)}" for name, pat in tr.patterns.items())
        parts.append(f"({cells})")
    if tr.guard is not None:
        parts.append(f"[{format_expr(tr.guard)}]")
    if tr.emissions:
        parts.append("emit " + ", ".join(f"{n} = {format_expr(e)}" for n, e in tr.emissions.items()))
    if tr.updates:
        parts.append("set " + ", ".join(f"{n} = {format_expr(e)}" for n, e in tr.updates.items()))
    parts.append(f"-> {tr.target}")
    return " ".join(parts)


def _format_pattern(pat: Pattern) -> str:
    if isinstance(pat, WildcardPattern):
        return "*"
    if isinstance(pat, LitPattern):
        return format_value(pat.value)
    return "eps"


def format_value(value: Value) -> str:
    if isinstance(value, Absent):
        return "eps"
    if isinstance(value, BoolV):
        return "true" if value.value else "false"
    if isinstance(value, IntV):
        return str(value.value)
    if isinstance(value, EnumV):
        return value.literal
    raise TypeError(f"not a value: {value!r}")


def format_expr(expr: Expr, parent_level: int = 0) -> str:
    """Minimal-parentheses rendering matching the parser's precedence."""
    if isinstance(expr, Lit):
        return format_value(expr.value)
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Unop):
        return f"!{format_expr(expr.operand, _UNARY_LEVEL)}"
    if isinstance(expr, Binop):
        level = _PRECEDENCE[expr.op]
        # Comparisons do not chain, so a nested comparison needs parentheses
        # on either side; the other operators are left-associative.
        left_level = level + 1 if level == 3 else level
        left = format_expr(expr.left, left_level)
        right = format_expr(expr.right, level + 1)
        text = f"{left} {expr.op} {right}"
        return f"({text})" if level < parent_level else text
    raise TypeError(f"not an expression: {expr!r}")
