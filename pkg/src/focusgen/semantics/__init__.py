"""Executable semantics: validation, simulation, input enumeration, traces."""

from .exprs import EvaluationError, clamp, eval_expr
from .inputspace import BudgetExceeded, DEFAULT_BUDGET, enumerate_inputs, sequence_count
from .simulate import CausalityCycle, FlatNetwork, Snapshot, Trace, flatten, initial_snapshot, run, step
from .tracefile import TraceFormatError, format_trace, parse_inputs, parse_trace
from .validate import ValidationReport, validate

__all__ = [
    "BudgetExceeded",
    "CausalityCycle",
    "DEFAULT_BUDGET",
    "EvaluationError",
    "FlatNetwork",
    "Snapshot",
    "Trace",
    "TraceFormatError",
    "ValidationReport",
    "clamp",
    "enumerate_inputs",
    "eval_expr",
    "flatten",
    "format_trace",
    "initial_snapshot",
    "parse_inputs",
    "parse_trace",
    "run",
    "sequence_count",
    "step",
    "validate",
]
