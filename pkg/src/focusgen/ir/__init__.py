"""Specification IR: frames, timed tables, composite wiring, lowering, checking."""

from .core import (
    CompositeSpec,
    FAnd,
    FAtom,
    FImplies,
    FNot,
    FOr,
    Formula,
    FTrue,
    GarFormula,
    INPUT,
    LOCAL,
    OUTPUT,
    STATE_STREAM,
    SpecFrame,
    StreamRef,
    SubApp,
    TAccess,
    TClamp,
    TLit,
    TOp,
    TRUE,
    TableRow,
    Term,
    TimedTable,
    conj,
    disj,
)
from .evaluate import InterfaceMismatch, SATISFIED, Satisfied, Violated, eval_frame
from .lower import (
    UnsupportedBody,
    build_timed_table,
    lower_atomic,
    lower_composite,
    lower_frame,
    lower_function,
    table_to_formulas,
)

__all__ = [
    "CompositeSpec",
    "FAnd",
    "FAtom",
    "FImplies",
    "FNot",
    "FOr",
    "Formula",
    "FTrue",
    "GarFormula",
    "INPUT",
    "InterfaceMismatch",
    "LOCAL",
    "OUTPUT",
    "SATISFIED",
    "STATE_STREAM",
    "Satisfied",
    "SpecFrame",
    "StreamRef",
    "SubApp",
    "TAccess",
    "TClamp",
    "TLit",
    "TOp",
    "TRUE",
    "TableRow",
    "Term",
    "TimedTable",
    "UnsupportedBody",
    "Violated",
    "build_timed_table",
    "conj",
    "disj",
    "eval_frame",
    "lower_atomic",
    "lower_composite",
    "lower_frame",
    "lower_function",
    "table_to_formulas",
]
