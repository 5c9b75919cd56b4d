"""In-memory representation of component-network models.

Everything here is a frozen dataclass; sequences are tuples and the
pattern/emission/update maps are insertion-ordered dicts. Only finite
data types exist (booleans, bounded integers, enumerations), so every
carrier can be enumerated exhaustively. Structural equality ignores
source spans (see :func:`focusgen.diagnostics.span_field`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..diagnostics import SourceSpan, span_field

RESERVED_STATE_NAME = "st"
RESERVED_WORDS = frozenset({"true", "false", "eps", "Bool", "Int", RESERVED_STATE_NAME})


# ---------------------------------------------------------------------------
# Data types and values


@dataclass(frozen=True)
class BoolType:
    def __str__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class IntRange:
    """Bounded integer type; lo <= hi is checked at resolution time."""

    lo: int
    hi: int

    def __str__(self) -> str:
        return f"Int[{self.lo}..{self.hi}]"


@dataclass(frozen=True)
class EnumType:
    """A declared enumeration. Literal names are unique model-wide."""

    name: str
    literals: tuple[str, ...]
    span: SourceSpan | None = span_field()

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class EnumRef:
    """Use-site reference to a declared enumeration, resolved by name."""

    name: str

    def __str__(self) -> str:
        return self.name


BOOL = BoolType()

# What may appear at a port/variable declaration.
PortType = BoolType | IntRange | EnumRef
# What carrier() accepts: a concrete, self-contained type.
ConcreteType = BoolType | IntRange | EnumType


class Absent:
    """The empty time slot, written eps in sources and traces."""

    _instance: "Absent | None" = None

    def __new__(cls) -> "Absent":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"


ABSENT = Absent()


@dataclass(frozen=True)
class BoolV:
    value: bool


@dataclass(frozen=True)
class IntV:
    value: int


@dataclass(frozen=True)
class EnumV:
    dtype: str
    literal: str


Value = Absent | BoolV | IntV | EnumV


def carrier(dtype: ConcreteType) -> tuple[Value, ...]:
    """All members of a finite type in canonical order.

    Booleans are false before true, bounded integers ascend, enumeration
    literals keep declaration order. Absent is a slot state, not a carrier
    member.
    """
    if isinstance(dtype, BoolType):
        return (BoolV(False), BoolV(True))
    if isinstance(dtype, IntRange):
        return tuple(IntV(n) for n in range(dtype.lo, dtype.hi + 1))
    if isinstance(dtype, EnumType):
        return tuple(EnumV(dtype.name, lit) for lit in dtype.literals)
    raise TypeError(f"not a concrete data type: {dtype!r}")


# ---------------------------------------------------------------------------
# Expressions

BINARY_OPS = ("+", "-", "=", "!=", "<", "<=", "&&", "||")
UNARY_OPS = ("!",)


@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Ref:
    """A name read: an input port, a variable, or an enumeration literal.

    Which one it is gets decided against the component environment; the
    three namespaces may not overlap, so the reading is unambiguous.
    """

    name: str


@dataclass(frozen=True)
class Binop:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Unop:
    op: str
    operand: "Expr"


Expr = Lit | Ref | Binop | Unop


# ---------------------------------------------------------------------------
# Input patterns


@dataclass(frozen=True)
class LitPattern:
    """The port must carry exactly this message."""

    value: Value


class WildcardPattern:
    """The port must carry some message (any carrier member, not eps)."""

    _instance: "WildcardPattern | None" = None

    def __new__(cls) -> "WildcardPattern":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "WILDCARD"


class AbsentPattern:
    """The port must be empty this slot."""

    _instance: "AbsentPattern | None" = None

    def __new__(cls) -> "AbsentPattern":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NO_MESSAGE"


WILDCARD = WildcardPattern()
NO_MESSAGE = AbsentPattern()

Pattern = LitPattern | WildcardPattern | AbsentPattern


# ---------------------------------------------------------------------------
# Components


class Direction(enum.Enum):
    IN = "in"
    OUT = "out"


class Causality(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class Port:
    name: str
    direction: Direction
    dtype: PortType
    init: Value = ABSENT  # slot-0 output of strongly causal components
    span: SourceSpan | None = span_field()


@dataclass(frozen=True)
class Variable:
    name: str
    dtype: PortType
    init: Value = ABSENT  # must be non-Absent; checked at resolve
    span: SourceSpan | None = span_field()


@dataclass(frozen=True)
class Transition:
    """One guarded automaton transition.

    An input port missing from ``patterns`` still has to carry a message
    for the transition to be enabled; it is treated exactly like an
    explicit wildcard. Ports and variables missing from ``emissions`` /
    ``updates`` stay empty resp. unchanged when the transition fires.
    """

    source: str
    target: str
    patterns: dict[str, Pattern] = field(default_factory=dict)
    guard: Expr | None = None
    emissions: dict[str, Expr] = field(default_factory=dict)
    updates: dict[str, Expr] = field(default_factory=dict)
    span: SourceSpan | None = span_field()


@dataclass(frozen=True)
class Automaton:
    states: tuple[str, ...]
    initial: str
    variables: tuple[Variable, ...] = ()
    transitions: tuple[Transition, ...] = ()


@dataclass(frozen=True)
class FunctionBehavior:
    """Stateless behavior: one expression over the input ports per output."""

    emissions: dict[str, Expr] = field(default_factory=dict)


@dataclass(frozen=True)
class SubComponent:
    name: str  # instance name
    component: str  # declared component name
    span: SourceSpan | None = span_field()


@dataclass(frozen=True)
class ParentPort:
    """Channel endpoint on the composite's own interface."""

    port: str


@dataclass(frozen=True)
class SubPort:
    """Channel endpoint on a subcomponent instance."""

    instance: str
    port: str


Endpoint = ParentPort | SubPort


@dataclass(frozen=True)
class Channel:
    name: str
    dtype: PortType
    source: Endpoint
    sink: Endpoint
    span: SourceSpan | None = span_field()


@dataclass(frozen=True)
class Composite:
    subs: tuple[SubComponent, ...]
    channels: tuple[Channel, ...]


Body = Automaton | FunctionBehavior | Composite


@dataclass(frozen=True)
class Component:
    name: str
    causality: Causality
    ports: tuple[Port, ...]
    body: Body
    span: SourceSpan | None = span_field()

    @property
    def in_ports(self) -> tuple[Port, ...]:
        return tuple(p for p in self.ports if p.direction is Direction.IN)

    @property
    def out_ports(self) -> tuple[Port, ...]:
        return tuple(p for p in self.ports if p.direction is Direction.OUT)

    @property
    def is_composite(self) -> bool:
        return isinstance(self.body, Composite)


@dataclass(frozen=True)
class Model:
    name: str
    types: tuple[EnumType, ...]
    components: tuple[Component, ...]
    root: str
    span: SourceSpan | None = span_field()
