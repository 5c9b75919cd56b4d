"""Semantic validation of resolved models.

Everything surfaces as a diagnostic; nothing here raises for model
defects. Errors block generation (ill-typed expressions, reads of ports
that may be empty, instantaneous feedback); nondeterminism and
unreachable states are warnings. Determinism is decided by brute force
over the finite carrier product of a state's inputs and variables, which
is exactly the enabling domain of its transitions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..diagnostics import Diagnostic, SourceSpan, error, warning, whole_file_span
from ..model import (
    ABSENT,
    AbsentPattern,
    Automaton,
    Binop,
    BoolType,
    BoolV,
    Causality,
    Component,
    Composite,
    Direction,
    EnumRef,
    EnumType,
    Expr,
    FunctionBehavior,
    IntRange,
    IntV,
    Lit,
    Ref,
    SubPort,
    Transition,
    Unop,
    Value,
)
from ..model.resolve import ResolvedModel
from .simulate import CausalityCycle, Snapshot, flatten, transition_enabled

# Beyond this many carrier combinations the disjointness check is skipped.
DISJOINTNESS_BUDGET = 200_000


@dataclass
class ValidationReport:
    diagnostics: list[Diagnostic] = field(default_factory=list)
    determinism: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(d.is_error for d in self.diagnostics)


# Expression types: "bool", "int", or ("enum", name).
_BOOL = "bool"
_INT = "int"


def validate(rm: ResolvedModel) -> ValidationReport:
    report = ValidationReport()
    for comp in rm.model.components:
        if isinstance(comp.body, Automaton):
            _validate_automaton(rm, comp, comp.body, report)
        elif isinstance(comp.body, FunctionBehavior):
            _validate_function(rm, comp, comp.body, report)
        else:
            _validate_composite(rm, comp, comp.body, report)
    return report


def _span(rm: ResolvedModel, *candidates: SourceSpan | None) -> SourceSpan:
    for c in candidates:
        if c is not None:
            return c
    return whole_file_span(rm.model.span.file if rm.model.span else f"<{rm.name}>")


def _dtype_desc(rm: ResolvedModel, dtype) -> str | tuple[str, str]:
    concrete = rm.concrete(dtype)
    if isinstance(concrete, BoolType):
        return _BOOL
    if isinstance(concrete, IntRange):
        return _INT
    assert isinstance(concrete, EnumType)
    return ("enum", concrete.name)


def _value_desc(rm: ResolvedModel, value: Value) -> str | tuple[str, str] | None:
    if isinstance(value, BoolV):
        return _BOOL
    if isinstance(value, IntV):
        return _INT
    if value is ABSENT:
        return None
    return ("enum", value.dtype)  # type: ignore[union-attr]


class _ExprChecker:
    """Types one expression against a component environment."""

    def __init__(
        self,
        rm: ResolvedModel,
        comp: Component,
        report: ValidationReport,
        span: SourceSpan,
        where: str,
        readable_ports: set[str] | None,
        blocked_ports: set[str] | None = None,
    ):
        self.rm = rm
        self.comp = comp
        self.report = report
        self.span = span
        self.where = where
        self.ports = rm.ports(comp)
        self.variables = rm.variables(comp)
        self.readable_ports = readable_ports
        self.blocked_ports = blocked_ports or set()
        self.failed = False

    def _err(self, code: str, message: str) -> None:
        self.report.diagnostics.append(error(self.span, code, f"{self.where}: {message}"))
        self.failed = True

    def check(self, expr: Expr) -> str | tuple[str, str] | None:
        if isinstance(expr, Lit):
            desc = _value_desc(self.rm, expr.value)
            if desc is None:
                self._err("type", "eps is not a value inside expressions")
            return desc
        if isinstance(expr, Ref):
            return self._check_ref(expr)
        if isinstance(expr, Unop):
            inner = self.check(expr.operand)
            if inner is not None and inner != _BOOL:
                self._err("type", "'!' needs a boolean operand")
                return None
            return _BOOL if inner is not None else None
        assert isinstance(expr, Binop)
        left = self.check(expr.left)
        right = self.check(expr.right)
        if left is None or right is None:
            return None
        op = expr.op
        if op in ("+", "-"):
            if left != _INT or right != _INT:
                self._err("type", f"'{op}' needs integer operands")
                return None
            return _INT
        if op in ("<", "<="):
            if left != _INT or right != _INT:
                self._err("type", f"'{op}' compares integers only")
                return None
            return _BOOL
        if op in ("=", "!="):
            if left != right:
                self._err("type", f"'{op}' compares values of one type, got {left} vs {right}")
                return None
            return _BOOL
        if op in ("&&", "||"):
            if left != _BOOL or right != _BOOL:
                self._err("type", f"'{op}' needs boolean operands")
                return None
            return _BOOL
        self._err("type", f"unknown operator '{op}'")
        return None

    def _check_ref(self, ref: Ref) -> str | tuple[str, str] | None:
        port = self.ports.get(ref.name)
        if port is not None:
            if port.direction is Direction.OUT:
                self._err("not-readable", f"output port '{ref.name}' cannot be read")
                return None
            if self.readable_ports is not None and ref.name not in self.readable_ports:
                self._err("not-readable", f"input port '{ref.name}' is not readable here")
                return None
            if ref.name in self.blocked_ports:
                self._err(
                    "unguarded-port-read",
                    f"input port '{ref.name}' may be empty here; require a message with a pattern",
                )
                return None
            return _dtype_desc(self.rm, port.dtype)
        var = self.variables.get(ref.name)
        if var is not None:
            return _dtype_desc(self.rm, var.dtype)
        lit = self.rm.literal_value(ref.name)
        if lit is not None:
            return ("enum", lit.dtype)
        self._err("unknown-name", f"'{ref.name}' names no port, variable or literal")
        return None


def _check_expr(
    rm: ResolvedModel,
    comp: Component,
    expr: Expr,
    expected: str | tuple[str, str],
    report: ValidationReport,
    span: SourceSpan,
    where: str,
    blocked_ports: set[str] | None = None,
    readable_ports: set[str] | None = None,
) -> bool:
    checker = _ExprChecker(rm, comp, report, span, where, readable_ports, blocked_ports)
    desc = checker.check(expr)
    if checker.failed:
        return False
    if desc is not None and desc != expected:
        report.diagnostics.append(error(span, "type", f"{where}: expected {expected}, got {desc}"))
        return False
    return True


def _validate_automaton(rm: ResolvedModel, comp: Component, auto: Automaton, report: ValidationReport) -> None:
    ok = True
    ports = rm.ports(comp)
    variables = rm.variables(comp)
    for i, tr in enumerate(auto.transitions, start=1):
        where = f"{comp.name}, transition {i}"
        span = _span(rm, tr.span, comp.span)
        # Ports matched against eps may not be read in this transition.
        blocked = {name for name, pat in tr.patterns.items() if isinstance(pat, AbsentPattern)}
        if tr.guard is not None:
            ok &= _check_expr(rm, comp, tr.guard, _BOOL, report, span, f"{where}, guard", blocked)
        for name, expr in tr.emissions.items():
            expected = _dtype_desc(rm, ports[name].dtype)
            ok &= _check_expr(rm, comp, expr, expected, report, span, f"{where}, emission '{name}'", blocked)
        for name, expr in tr.updates.items():
            expected = _dtype_desc(rm, variables[name].dtype)
            ok &= _check_expr(rm, comp, expr, expected, report, span, f"{where}, update '{name}'", blocked)

    _check_reachability(rm, comp, auto, report)
    if ok:
        report.determinism[comp.name] = _check_disjointness(rm, comp, auto, report)
    else:
        report.determinism[comp.name] = False


def _check_reachability(rm: ResolvedModel, comp: Component, auto: Automaton, report: ValidationReport) -> None:
    reachable = {auto.initial}
    frontier = [auto.initial]
    edges: dict[str, list[str]] = {}
    for tr in auto.transitions:
        edges.setdefault(tr.source, []).append(tr.target)
    while frontier:
        st = frontier.pop()
        for nxt in edges.get(st, ()):
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    for st in auto.states:
        if st not in reachable:
            report.diagnostics.append(
                warning(_span(rm, comp.span), "unreachable-state", f"{comp.name}: state '{st}' is unreachable")
            )


def _check_disjointness(rm: ResolvedModel, comp: Component, auto: Automaton, report: ValidationReport) -> bool:
    """Brute-force pairwise disjointness of enabling conditions per state."""
    in_ports = comp.in_ports
    options = [(ABSENT,) + rm.carrier_of(p.dtype) for p in in_ports]
    var_options = [rm.carrier_of(v.dtype) for v in auto.variables]
    combos = 1
    for opts in options + var_options:
        combos *= len(opts)
    if combos > DISJOINTNESS_BUDGET:
        report.diagnostics.append(
            warning(
                _span(rm, comp.span),
                "determinism-unchecked",
                f"{comp.name}: {combos} carrier combinations exceed the disjointness budget",
            )
        )
        return False
    deterministic = True
    for state in auto.states:
        candidates = [(i, tr) for i, tr in enumerate(auto.transitions, start=1) if tr.source == state]
        if len(candidates) < 2:
            continue
        overlap = _find_overlap(rm, comp, state, candidates, options, var_options, auto)
        if overlap is not None:
            i, j = overlap
            deterministic = False
            report.diagnostics.append(
                warning(
                    _span(rm, auto.transitions[j - 1].span, comp.span),
                    "nondeterministic",
                    f"{comp.name}: transitions {i} and {j} from state '{state}' can fire together",
                )
            )
    return deterministic


def _find_overlap(rm, comp, state, candidates, options, var_options, auto) -> tuple[int, int] | None:
    port_names = [p.name for p in comp.in_ports]
    var_names = [v.name for v in auto.variables]
    for ivals in itertools.product(*options) if options else [()]:
        inputs = dict(zip(port_names, ivals))
        for vvals in itertools.product(*var_options) if var_options else [()]:
            snap = Snapshot(state=state, vars=dict(zip(var_names, vvals)))
            enabled = [
                i for i, tr in candidates if transition_enabled(rm, comp, tr, snap, inputs)
            ]
            if len(enabled) > 1:
                return enabled[0], enabled[1]
    return None


def _validate_function(rm: ResolvedModel, comp: Component, fn: FunctionBehavior, report: ValidationReport) -> None:
    ports = rm.ports(comp)
    readable = {p.name for p in comp.in_ports}
    for name, expr in fn.emissions.items():
        expected = _dtype_desc(rm, ports[name].dtype)
        _check_expr(
            rm,
            comp,
            expr,
            expected,
            report,
            _span(rm, comp.span),
            f"{comp.name}, emission '{name}'",
            readable_ports=readable,
        )
    report.determinism[comp.name] = True


def _validate_composite(rm: ResolvedModel, comp: Component, body: Composite, report: ValidationReport) -> None:
    # Declared-level check: channels leaving weakly causal subcomponents
    # are same-slot edges; a cycle of those cannot be scheduled.
    index = {sub.name: i for i, sub in enumerate(body.subs)}
    edges: dict[int, set[int]] = {i: set() for i in index.values()}
    for ch in body.channels:
        if isinstance(ch.source, SubPort) and isinstance(ch.sink, SubPort):
            src_comp = rm.component(next(s.component for s in body.subs if s.name == ch.source.instance))
            if src_comp.causality is Causality.WEAK:
                edges[index[ch.source.instance]].add(index[ch.sink.instance])
    if _has_cycle(edges):
        report.diagnostics.append(
            error(
                _span(rm, comp.span),
                "causality-cycle",
                f"{comp.name}: zero-delay feedback between weakly causal subcomponents",
            )
        )
        return
    # Flattened check catches instantaneous paths hidden inside nested
    # composites whose declared causality promises a delay they lack.
    try:
        flatten(rm, comp.name)
    except CausalityCycle as cycle:
        report.diagnostics.append(
            error(
                _span(rm, comp.span),
                "causality-cycle",
                f"{comp.name}: zero-delay feedback through {', '.join(cycle.instances)}",
            )
        )


def _has_cycle(edges: dict[int, set[int]]) -> bool:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in edges}

    def visit(n: int) -> bool:
        color[n] = GRAY
        for m in edges[n]:
            if color[m] == GRAY or (color[m] == WHITE and visit(m)):
                return True
        color[n] = BLACK
        return False

    return any(color[n] == WHITE and visit(n) for n in edges)
