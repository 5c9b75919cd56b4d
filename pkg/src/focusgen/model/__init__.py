"""Component-network model core: types, values, and resolution."""

from .resolve import (
    DuplicateName,
    InvalidModel,
    ModelError,
    ResolvedModel,
    UnknownReference,
    resolve,
)
from .types import (
    ABSENT,
    AbsentPattern,
    WildcardPattern,
    BOOL,
    Absent,
    Automaton,
    BoolType,
    BoolV,
    Causality,
    Channel,
    Component,
    Composite,
    ConcreteType,
    Direction,
    EnumRef,
    EnumType,
    EnumV,
    Expr,
    FunctionBehavior,
    IntRange,
    IntV,
    Lit,
    LitPattern,
    Model,
    NO_MESSAGE,
    ParentPort,
    Pattern,
    Port,
    PortType,
    Ref,
    SubComponent,
    SubPort,
    Transition,
    Unop,
    Value,
    Variable,
    WILDCARD,
    Binop,
    carrier,
)

__all__ = [
    "ABSENT",
    "AbsentPattern",
    "WildcardPattern",
    "BOOL",
    "Absent",
    "Automaton",
    "Binop",
    "BoolType",
    "BoolV",
    "Causality",
    "Channel",
    "Component",
    "Composite",
    "ConcreteType",
    "Direction",
    "DuplicateName",
    "EnumRef",
    "EnumType",
    "EnumV",
    "Expr",
    "FunctionBehavior",
    "IntRange",
    "IntV",
    "InvalidModel",
    "Lit",
    "LitPattern",
    "Model",
    "ModelError",
    "NO_MESSAGE",
    "ParentPort",
    "Pattern",
    "Port",
    "PortType",
    "Ref",
    "ResolvedModel",
    "SubComponent",
    "SubPort",
    "Transition",
    "UnknownReference",
    "Unop",
    "Value",
    "Variable",
    "WILDCARD",
    "carrier",
    "resolve",
]
