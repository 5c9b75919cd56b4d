"""Strict evaluation of model expressions.

Evaluation is strict in the empty slot: any operand that is Absent makes
the whole operation Absent. Only stateless function components can ever
see an Absent operand (validation pins automaton reads to present
messages), and there the emptiness simply propagates to the output.
Stored values saturate into their target's integer bounds via clamp().
"""

from __future__ import annotations

from typing import Mapping

from ..model import (
    ABSENT,
    Absent,
    Binop,
    BoolV,
    ConcreteType,
    Expr,
    IntRange,
    IntV,
    Lit,
    Ref,
    Unop,
    Value,
)


class EvaluationError(Exception):
    """An ill-typed expression reached evaluation; validate precludes this."""


def eval_expr(expr: Expr, env: Mapping[str, Value]) -> Value:
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Ref):
        try:
            return env[expr.name]
        except KeyError:
            raise EvaluationError(f"unknown name '{expr.name}'") from None
    if isinstance(expr, Unop):
        operand = eval_expr(expr.operand, env)
        if isinstance(operand, Absent):
            return ABSENT
        if not isinstance(operand, BoolV):
            raise EvaluationError("'!' applied to a non-boolean")
        return BoolV(not operand.value)
    if isinstance(expr, Binop):
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        if isinstance(left, Absent) or isinstance(right, Absent):
            return ABSENT
        return apply_binop(expr.op, left, right)
    raise EvaluationError(f"not an expression: {expr!r}")


def apply_binop(op: str, left: Value, right: Value) -> Value:
    if op == "=":
        return BoolV(left == right)
    if op == "!=":
        return BoolV(left != right)
    if op in ("+", "-", "<", "<="):
        if not isinstance(left, IntV) or not isinstance(right, IntV):
            raise EvaluationError(f"'{op}' applied to non-integers")
        if op == "+":
            return IntV(left.value + right.value)
        if op == "-":
            return IntV(left.value - right.value)
        if op == "<":
            return BoolV(left.value < right.value)
        return BoolV(left.value <= right.value)
    if op in ("&&", "||"):
        if not isinstance(left, BoolV) or not isinstance(right, BoolV):
            raise EvaluationError(f"'{op}' applied to non-booleans")
        if op == "&&":
            return BoolV(left.value and right.value)
        return BoolV(left.value or right.value)
    raise EvaluationError(f"unknown operator '{op}'")


def clamp(value: Value, dtype: ConcreteType) -> Value:
    """Saturate a stored integer into its target type's bounds."""
    if isinstance(value, IntV) and isinstance(dtype, IntRange):
        return IntV(min(max(value.value, dtype.lo), dtype.hi))
    return value


def is_true(value: Value) -> bool:
    return isinstance(value, BoolV) and value.value
