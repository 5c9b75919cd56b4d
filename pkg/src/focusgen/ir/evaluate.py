"""Finite-trace checking of specification frames.

Decides whether a trace belongs to the input/output relation a frame
denotes, at finite horizon. Prefix semantics: a next-slot stream access
past the end of the trace makes its conjunct unknown, and an unknown
top-level verdict counts as satisfied. State and variable snapshots
exist for every slot boundary, so only port accesses can run off the
end.

This module intentionally re-implements value operations instead of
importing the simulator's, so that the faithfulness check compares two
independently written routes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import ABSENT, Absent, BoolV, EnumV, IntV, Value
from ..semantics.simulate import Trace
from .core import (
    FAtom,
    FAnd,
    FImplies,
    FNot,
    FOr,
    Formula,
    FTrue,
    GarFormula,
    SpecFrame,
    STATE_STREAM,
    TAccess,
    TClamp,
    TLit,
    TOp,
    Term,
)


class InterfaceMismatch(Exception):
    """The trace does not carry the streams the frame talks about."""


@dataclass(frozen=True)
class Satisfied:
    pass


@dataclass(frozen=True)
class Violated:
    """First failing formula: index 0 is the init section, 1..n are gar."""

    index: int
    slot: int


SATISFIED = Satisfied()

_UNKNOWN = object()  # out-of-trace access marker

_TRUE, _FALSE = True, False


def eval_frame(frame: SpecFrame, trace: Trace) -> Satisfied | Violated:
    """Check init at slot 0 and every guarantee at every slot."""
    if trace.horizon < 1:
        raise InterfaceMismatch("trace checking needs horizon >= 1")
    for name, _ in frame.inputs + frame.outputs:
        if name not in trace.identities:
            raise InterfaceMismatch(f"trace has no stream '{name}'")
    needs_state = frame.state_type is not None or frame.variables
    if needs_state and frame.name not in trace.states[0]:
        raise InterfaceMismatch(f"trace has no state snapshots for '{frame.name}'")
    ctx = _Context(frame, trace)

    for eq in frame.init:
        if _formula(eq, ctx, 0) is _FALSE:
            return Violated(index=0, slot=0)
    # Guarantees are checked only under a satisfied assumption.
    for t in range(trace.horizon):
        for a in frame.asm:
            if _formula(a, ctx, t) is _FALSE:
                return SATISFIED
    for t in range(trace.horizon):
        for g in frame.gar:
            if _formula(g.formula, ctx, t) is _FALSE:
                return Violated(index=g.index, slot=t)
    return SATISFIED


class _Context:
    def __init__(self, frame: SpecFrame, trace: Trace):
        self.trace = trace
        self.variables = {name for name, _ in frame.variables}
        self.state_type = frame.state_type
        self.instance = frame.name

    def access(self, name: str, time: int):
        trace = self.trace
        if name == STATE_STREAM:
            snap = trace.states[time].get(self.instance)
            if snap is None or self.state_type is None:
                raise InterfaceMismatch(f"no state snapshot for '{self.instance}'")
            return EnumV(self.state_type.name, snap.state)
        if name in self.variables:
            snap = trace.states[time].get(self.instance)
            if snap is None:
                raise InterfaceMismatch(f"no state snapshot for '{self.instance}'")
            return snap.vars[name]
        if time >= trace.horizon:
            return _UNKNOWN
        try:
            return trace.slots[time][name]
        except KeyError:
            raise InterfaceMismatch(f"trace has no stream '{name}'") from None


def _term(term: Term, ctx: _Context, t: int):
    if isinstance(term, TLit):
        return term.value
    if isinstance(term, TAccess):
        return ctx.access(term.name, t + term.shift)
    if isinstance(term, TClamp):
        inner = _term(term.arg, ctx, t)
        if inner is _UNKNOWN or isinstance(inner, Absent):
            return inner
        if isinstance(inner, IntV):
            return IntV(min(max(inner.value, term.lo), term.hi))
        return inner
    assert isinstance(term, TOp)
    args = [_term(a, ctx, t) for a in term.args]
    if any(a is _UNKNOWN for a in args):
        return _UNKNOWN
    if any(isinstance(a, Absent) for a in args):
        return ABSENT
    return _op(term.op, args)


def _op(op: str, args: list[Value]) -> Value:
    if op == "!":
        (a,) = args
        assert isinstance(a, BoolV)
        return BoolV(not a.value)
    a, b = args
    if op == "=":
        return BoolV(a == b)
    if op == "!=":
        return BoolV(a != b)
    if op in ("+", "-", "<", "<="):
        assert isinstance(a, IntV) and isinstance(b, IntV)
        if op == "+":
            return IntV(a.value + b.value)
        if op == "-":
            return IntV(a.value - b.value)
        if op == "<":
            return BoolV(a.value < b.value)
        return BoolV(a.value <= b.value)
    assert op in ("&&", "||"), op
    assert isinstance(a, BoolV) and isinstance(b, BoolV)
    return BoolV(a.value and b.value) if op == "&&" else BoolV(a.value or b.value)


def _atom(atom: FAtom, ctx: _Context, t: int):
    left = _term(atom.left, ctx, t)
    right = _term(atom.right, ctx, t)
    if left is _UNKNOWN or right is _UNKNOWN:
        return _UNKNOWN
    if atom.op == "=":
        return left == right
    if atom.op == "!=":
        return left != right
    # Order comparisons need two present integers.
    if isinstance(left, Absent) or isinstance(right, Absent):
        return _FALSE
    if not (isinstance(left, IntV) and isinstance(right, IntV)):
        return _FALSE
    if atom.op == "<":
        return left.value < right.value
    return left.value <= right.value


def _formula(f: Formula, ctx: _Context, t: int):
    """Kleene three-valued evaluation; _UNKNOWN stands for 'off the trace'."""
    if isinstance(f, FTrue):
        return _TRUE
    if isinstance(f, FAtom):
        return _atom(f, ctx, t)
    if isinstance(f, FNot):
        inner = _formula(f.arg, ctx, t)
        return inner if inner is _UNKNOWN else not inner
    if isinstance(f, FAnd):
        saw_unknown = False
        for part in f.args:
            v = _formula(part, ctx, t)
            if v is _FALSE:
                return _FALSE
            if v is _UNKNOWN:
                saw_unknown = True
        return _UNKNOWN if saw_unknown else _TRUE
    if isinstance(f, FOr):
        saw_unknown = False
        for part in f.args:
            v = _formula(part, ctx, t)
            if v is _TRUE:
                return _TRUE
            if v is _UNKNOWN:
                saw_unknown = True
        return _UNKNOWN if saw_unknown else _FALSE
    assert isinstance(f, FImplies)
    a = _formula(f.antecedent, ctx, t)
    if a is _FALSE:
        return _TRUE
    b = _formula(f.consequent, ctx, t)
    if a is _UNKNOWN:
        return _TRUE if b is _TRUE else _UNKNOWN
    return b


def formula_antecedent(f: Formula) -> Formula | None:
    """The enabling side of a guarantee; None means unconditional."""
    if isinstance(f, FImplies):
        return f.antecedent
    return None


def eval_formula_at(frame: SpecFrame, trace: Trace, formula: Formula, t: int):
    """Three-valued check of one formula at one slot (True/False/None)."""
    result = _formula(formula, _Context(frame, trace), t)
    return None if result is _UNKNOWN else result
