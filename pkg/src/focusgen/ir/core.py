"""Specification intermediate representation.

A frame describes one component as an assumption/guarantee pair over
time-indexed streams. Formulas separate two layers:

* terms produce values and evaluate strictly (an empty slot poisons the
  operation, mirroring the simulator's expression semantics), and
* atoms compare two terms, where ``=`` and ``!=`` treat the empty slot
  as just another value, so ``y(t) = x(t)`` holds when both are empty.

Every formula is implicitly universally quantified over the time index;
a shift of 0 reads the current slot, 1 the next. ``st`` is the reserved
state stream introduced by lowering.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import EnumType, PortType, Value

STATE_STREAM = "st"

INPUT = "input"
OUTPUT = "output"
LOCAL = "local"


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class TLit:
    value: Value  # ABSENT is the eps literal


@dataclass(frozen=True)
class TAccess:
    """Stream access: name(t) for shift 0, name(t+1) for shift 1."""

    name: str
    shift: int = 0


@dataclass(frozen=True)
class TOp:
    """Strict operator application; one empty operand empties the result."""

    op: str  # + - = != < <= && || !
    args: tuple["Term", ...]


@dataclass(frozen=True)
class TClamp:
    """Saturation of a stored integer into its target bounds.

    Documents render the inner term only; the convention is stated once
    in the generated preamble.
    """

    lo: int
    hi: int
    arg: "Term"


Term = TLit | TAccess | TOp | TClamp


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class FTrue:
    pass


@dataclass(frozen=True)
class FAtom:
    """Comparison of two terms; = and != are total on the empty slot."""

    op: str  # = != < <=
    left: Term
    right: Term


@dataclass(frozen=True)
class FNot:
    arg: "Formula"


@dataclass(frozen=True)
class FAnd:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class FOr:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class FImplies:
    antecedent: "Formula"
    consequent: "Formula"


Formula = FTrue | FAtom | FNot | FAnd | FOr | FImplies

TRUE = FTrue()


def conj(parts: list["Formula"]) -> "Formula":
    parts = [p for p in parts if not isinstance(p, FTrue)]
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return FAnd(tuple(parts))


def disj(parts: list["Formula"]) -> "Formula":
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return FOr(tuple(parts))


# ---------------------------------------------------------------------------
# Frames, tables, composites


@dataclass(frozen=True)
class StreamRef:
    """A named stream actual in composite wiring."""

    name: str
    kind: str  # INPUT, OUTPUT or LOCAL


@dataclass(frozen=True)
class GarFormula:
    """A guarantee formula with its display index (1-based, contiguous)."""

    index: int
    formula: Formula


@dataclass(frozen=True)
class SpecFrame:
    """An elementary assumption/guarantee specification."""

    name: str
    inputs: tuple[tuple[str, PortType], ...]
    outputs: tuple[tuple[str, PortType], ...]
    state_type: EnumType | None  # synthesized from the automaton states
    variables: tuple[tuple[str, PortType], ...]
    init: tuple[FAtom, ...]  # equations over index 0
    asm: tuple[Formula, ...]
    gar: tuple[GarFormula, ...]


@dataclass(frozen=True)
class TableRow:
    """One transition: cells line up with the table's header."""

    state: str
    patterns: tuple[object, ...]  # model Pattern per input port
    guard: Formula | None  # None renders as true
    outputs: tuple[Term | None, ...]  # None renders as the empty slot
    updates: tuple[Term | None, ...]  # None renders as "unchanged"
    next: str


@dataclass(frozen=True)
class TimedTable:
    name: str
    in_ports: tuple[str, ...]
    out_ports: tuple[str, ...]
    variables: tuple[str, ...]
    out_shift: int  # 0 for weak causality, 1 for strong
    rows: tuple[TableRow, ...]


@dataclass(frozen=True)
class SubApp:
    """One subcomponent application inside a composite's wiring."""

    component: str
    instance: str
    inputs: tuple[StreamRef, ...]
    outputs: tuple[StreamRef, ...]


@dataclass(frozen=True)
class CompositeSpec:
    name: str
    inputs: tuple[tuple[str, PortType], ...]
    outputs: tuple[tuple[str, PortType], ...]
    locals: tuple[tuple[str, PortType], ...]
    wiring: tuple[SubApp, ...]  # rendered as one conjunction
