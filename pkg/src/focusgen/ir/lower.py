"""Lowering from validated components to specification frames and tables.

One guarantee formula per transition plus a final stutter formula that
totalizes the relation: when no transition is enabled, state and data
persist and the outputs stay empty. Weakly causal components emit into
the current slot, strongly causal ones into the next, with slot 0 pinned
by the declared port initial values in the init section.

The formula and the timed-table routes are inter-derivable; the
``table_to_formulas`` compiler rebuilds transition formulas from row
cells alone, which the test suite compares against ``lower_atomic``.
"""

from __future__ import annotations

from ..model import (
    ABSENT,
    AbsentPattern,
    Automaton,
    Binop,
    Causality,
    Component,
    Composite,
    Expr,
    FunctionBehavior,
    IntRange,
    Lit,
    LitPattern,
    ParentPort,
    Pattern,
    Port,
    Ref,
    SubPort,
    Transition,
    Unop,
    Variable,
    WILDCARD,
    BoolV,
    EnumType,
    EnumV,
)
from ..model.resolve import ResolvedModel
from .core import (
    INPUT,
    LOCAL,
    OUTPUT,
    STATE_STREAM,
    CompositeSpec,
    FAtom,
    FImplies,
    FNot,
    Formula,
    FTrue,
    GarFormula,
    SpecFrame,
    StreamRef,
    SubApp,
    TAccess,
    TClamp,
    TLit,
    TOp,
    TableRow,
    Term,
    TimedTable,
    TRUE,
    conj,
    disj,
)


class UnsupportedBody(Exception):
    """The component's body kind does not fit the requested lowering."""


def state_type_of(comp: Component, auto: Automaton) -> EnumType:
    return EnumType(name=f"{comp.name}State", literals=auto.states)


def state_literal(comp: Component, state: str) -> TLit:
    return TLit(EnumV(f"{comp.name}State", state))


def lower_expr(rm: ResolvedModel, comp: Component, expr: Expr) -> Term:
    """Model expression to term; reads become current-slot accesses."""
    if isinstance(expr, Lit):
        return TLit(expr.value)
    if isinstance(expr, Ref):
        lit = rm.literal_value(expr.name)
        if lit is not None and expr.name not in rm.ports(comp) and expr.name not in rm.variables(comp):
            return TLit(lit)
        return TAccess(expr.name, 0)
    if isinstance(expr, Unop):
        return TOp("!", (lower_expr(rm, comp, expr.operand),))
    assert isinstance(expr, Binop)
    return TOp(expr.op, (lower_expr(rm, comp, expr.left), lower_expr(rm, comp, expr.right)))


def lower_stored_expr(rm: ResolvedModel, comp: Component, expr: Expr, target_dtype) -> Term:
    """Like lower_expr, but saturating into an integer target's bounds."""
    term = lower_expr(rm, comp, expr)
    concrete = rm.concrete(target_dtype)
    if isinstance(concrete, IntRange):
        return TClamp(concrete.lo, concrete.hi, term)
    return term


def lower_guard(rm: ResolvedModel, comp: Component, expr: Expr) -> Formula:
    """Boolean expression to formula; connectives map structurally."""
    if isinstance(expr, Binop):
        if expr.op == "&&":
            return conj([lower_guard(rm, comp, expr.left), lower_guard(rm, comp, expr.right)])
        if expr.op == "||":
            return disj([lower_guard(rm, comp, expr.left), lower_guard(rm, comp, expr.right)])
        if expr.op in ("=", "!=", "<", "<="):
            return FAtom(expr.op, lower_expr(rm, comp, expr.left), lower_expr(rm, comp, expr.right))
    if isinstance(expr, Unop):
        return FNot(lower_guard(rm, comp, expr.operand))
    if isinstance(expr, Lit) and isinstance(expr.value, BoolV):
        if expr.value.value:
            return TRUE
        return FAtom("=", TLit(BoolV(True)), TLit(BoolV(False)))
    # A bare boolean read (or && under arithmetic shapes) becomes an atom.
    return FAtom("=", lower_expr(rm, comp, expr), TLit(BoolV(True)))


def _pattern_atom(port: Port, pat: Pattern | None) -> FAtom:
    """One enabling conjunct per input port; a missing pattern is a wildcard."""
    access = TAccess(port.name, 0)
    if pat is None or pat is WILDCARD:
        return FAtom("!=", access, TLit(ABSENT))
    if isinstance(pat, AbsentPattern):
        return FAtom("=", access, TLit(ABSENT))
    assert isinstance(pat, LitPattern)
    return FAtom("=", access, TLit(pat.value))


def _enabling(rm: ResolvedModel, comp: Component, tr: Transition) -> Formula:
    parts: list[Formula] = [FAtom("=", TAccess(STATE_STREAM, 0), state_literal(comp, tr.source))]
    for port in comp.in_ports:
        parts.append(_pattern_atom(port, tr.patterns.get(port.name)))
    if tr.guard is not None:
        parts.append(lower_guard(rm, comp, tr.guard))
    return conj(parts)


def _consequent(
    rm: ResolvedModel,
    comp: Component,
    out_shift: int,
    emissions: dict[str, Expr],
    updates: dict[str, Expr],
    target: str,
) -> Formula:
    parts: list[Formula] = []
    for port in comp.out_ports:
        expr = emissions.get(port.name)
        if expr is None:
            parts.append(FAtom("=", TAccess(port.name, out_shift), TLit(ABSENT)))
        else:
            parts.append(
                FAtom("=", TAccess(port.name, out_shift), lower_stored_expr(rm, comp, expr, port.dtype))
            )
    for var in _variables(comp):
        expr = updates.get(var.name)
        if expr is None:
            parts.append(FAtom("=", TAccess(var.name, 1), TAccess(var.name, 0)))
        else:
            parts.append(FAtom("=", TAccess(var.name, 1), lower_stored_expr(rm, comp, expr, var.dtype)))
    parts.append(FAtom("=", TAccess(STATE_STREAM, 1), state_literal(comp, target)))
    return conj(parts)


def _stutter(rm: ResolvedModel, comp: Component, auto: Automaton, out_shift: int) -> Formula:
    persists: list[Formula] = [FAtom("=", TAccess(STATE_STREAM, 1), TAccess(STATE_STREAM, 0))]
    for var in auto.variables:
        persists.append(FAtom("=", TAccess(var.name, 1), TAccess(var.name, 0)))
    for port in comp.out_ports:
        persists.append(FAtom("=", TAccess(port.name, out_shift), TLit(ABSENT)))
    body = conj(persists)
    enablings = [_enabling(rm, comp, tr) for tr in auto.transitions]
    if not enablings:
        return body
    return FImplies(FNot(disj(enablings)), body)


def _variables(comp: Component) -> tuple[Variable, ...]:
    if isinstance(comp.body, Automaton):
        return comp.body.variables
    return ()


def _out_shift(comp: Component) -> int:
    return 1 if comp.causality is Causality.STRONG else 0


def _interface(rm: ResolvedModel, comp: Component) -> tuple[tuple, tuple]:
    ins = tuple((p.name, rm.concrete(p.dtype)) for p in comp.in_ports)
    outs = tuple((p.name, rm.concrete(p.dtype)) for p in comp.out_ports)
    return ins, outs


def _output_init(comp: Component) -> list[FAtom]:
    return [FAtom("=", TAccess(p.name, 0), TLit(p.init)) for p in comp.out_ports]


def lower_atomic(rm: ResolvedModel, comp: Component) -> SpecFrame:
    """Automaton component to assumption/guarantee frame."""
    if not isinstance(comp.body, Automaton):
        raise UnsupportedBody(f"lower_atomic needs an automaton, '{comp.name}' has none")
    auto = comp.body
    shift = _out_shift(comp)
    ins, outs = _interface(rm, comp)

    init: list[FAtom] = [FAtom("=", TAccess(STATE_STREAM, 0), state_literal(comp, auto.initial))]
    for var in auto.variables:
        init.append(FAtom("=", TAccess(var.name, 0), TLit(var.init)))
    if comp.causality is Causality.STRONG:
        init.extend(_output_init(comp))

    gar: list[GarFormula] = []
    for i, tr in enumerate(auto.transitions, start=1):
        formula = FImplies(
            _enabling(rm, comp, tr),
            _consequent(rm, comp, shift, tr.emissions, tr.updates, tr.target),
        )
        gar.append(GarFormula(index=i, formula=formula))
    gar.append(GarFormula(index=len(auto.transitions) + 1, formula=_stutter(rm, comp, auto, shift)))

    return SpecFrame(
        name=comp.name,
        inputs=ins,
        outputs=outs,
        state_type=state_type_of(comp, auto),
        variables=tuple((v.name, rm.concrete(v.dtype)) for v in auto.variables),
        init=tuple(init),
        asm=(TRUE,),
        gar=tuple(gar),
    )


def lower_function(rm: ResolvedModel, comp: Component) -> SpecFrame:
    """Stateless component to a frame of one equation per output."""
    if not isinstance(comp.body, FunctionBehavior):
        raise UnsupportedBody(f"lower_function needs a function body, '{comp.name}' has none")
    fn = comp.body
    shift = _out_shift(comp)
    ins, outs = _interface(rm, comp)
    init = _output_init(comp) if comp.causality is Causality.STRONG else []
    gar = []
    for i, port in enumerate(comp.out_ports, start=1):
        term = lower_stored_expr(rm, comp, fn.emissions[port.name], port.dtype)
        gar.append(GarFormula(index=i, formula=FAtom("=", TAccess(port.name, shift), term)))
    return SpecFrame(
        name=comp.name,
        inputs=ins,
        outputs=outs,
        state_type=None,
        variables=(),
        init=tuple(init),
        asm=(TRUE,),
        gar=tuple(gar),
    )


def lower_frame(rm: ResolvedModel, comp: Component) -> SpecFrame:
    if isinstance(comp.body, Automaton):
        return lower_atomic(rm, comp)
    if isinstance(comp.body, FunctionBehavior):
        return lower_function(rm, comp)
    raise UnsupportedBody(f"'{comp.name}' is composite; use lower_composite")


def build_timed_table(rm: ResolvedModel, comp: Component) -> TimedTable:
    """Tabular rendering of an automaton: one row per transition."""
    if not isinstance(comp.body, Automaton):
        raise UnsupportedBody(f"build_timed_table needs an automaton, '{comp.name}' has none")
    auto = comp.body
    rows = []
    for tr in auto.transitions:
        patterns = tuple(tr.patterns.get(p.name, WILDCARD) for p in comp.in_ports)
        guard = lower_guard(rm, comp, tr.guard) if tr.guard is not None else None
        outputs = tuple(
            lower_stored_expr(rm, comp, tr.emissions[p.name], p.dtype) if p.name in tr.emissions else None
            for p in comp.out_ports
        )
        updates = tuple(
            lower_stored_expr(rm, comp, tr.updates[v.name], v.dtype) if v.name in tr.updates else None
            for v in auto.variables
        )
        rows.append(
            TableRow(
                state=tr.source,
                patterns=patterns,
                guard=guard,
                outputs=outputs,
                updates=updates,
                next=tr.target,
            )
        )
    return TimedTable(
        name=comp.name,
        in_ports=tuple(p.name for p in comp.in_ports),
        out_ports=tuple(p.name for p in comp.out_ports),
        variables=tuple(v.name for v in auto.variables),
        out_shift=_out_shift(comp),
        rows=tuple(rows),
    )


def table_to_formulas(comp: Component, table: TimedTable) -> list[Formula]:
    """Recompile table rows into transition formulas (coherence check)."""
    ports = {p.name: p for p in comp.ports}
    out = []
    for row in table.rows:
        parts: list[Formula] = [FAtom("=", TAccess(STATE_STREAM, 0), state_literal(comp, row.state))]
        for pname, pat in zip(table.in_ports, row.patterns):
            parts.append(_pattern_atom(ports[pname], pat))
        if row.guard is not None and not isinstance(row.guard, FTrue):
            parts.append(row.guard)
        consequent: list[Formula] = []
        for pname, term in zip(table.out_ports, row.outputs):
            rhs: Term = TLit(ABSENT) if term is None else term
            consequent.append(FAtom("=", TAccess(pname, table.out_shift), rhs))
        for vname, term in zip(table.variables, row.updates):
            rhs = TAccess(vname, 0) if term is None else term
            consequent.append(FAtom("=", TAccess(vname, 1), rhs))
        consequent.append(FAtom("=", TAccess(STATE_STREAM, 1), state_literal(comp, row.next)))
        out.append(FImplies(conj(parts), conj(consequent)))
    return out


def lower_composite(rm: ResolvedModel, comp: Component) -> CompositeSpec:
    """Composite component to local-channel declarations plus wiring."""
    if not isinstance(comp.body, Composite):
        raise UnsupportedBody(f"lower_composite needs a composite, '{comp.name}' is atomic")
    body = comp.body
    ins, outs = _interface(rm, comp)
    locals_ = tuple(
        (ch.name, rm.concrete(ch.dtype))
        for ch in body.channels
        if isinstance(ch.source, SubPort) and isinstance(ch.sink, SubPort)
    )
    by_sink = {(ch.sink.instance, ch.sink.port): ch for ch in body.channels if isinstance(ch.sink, SubPort)}
    by_source = {
        (ch.source.instance, ch.source.port): ch for ch in body.channels if isinstance(ch.source, SubPort)
    }
    wiring = []
    for sub in body.subs:
        target = rm.component(sub.component)
        actual_ins = []
        for port in target.in_ports:
            ch = by_sink[(sub.name, port.name)]
            if isinstance(ch.source, ParentPort):
                actual_ins.append(StreamRef(ch.source.port, INPUT))
            else:
                actual_ins.append(StreamRef(ch.name, LOCAL))
        actual_outs = []
        for port in target.out_ports:
            ch = by_source[(sub.name, port.name)]
            if isinstance(ch.sink, ParentPort):
                actual_outs.append(StreamRef(ch.sink.port, OUTPUT))
            else:
                actual_outs.append(StreamRef(ch.name, LOCAL))
        wiring.append(
            SubApp(
                component=sub.component,
                instance=sub.name,
                inputs=tuple(actual_ins),
                outputs=tuple(actual_outs),
            )
        )
    return CompositeSpec(name=comp.name, inputs=ins, outputs=outs, locals=locals_, wiring=tuple(wiring))
