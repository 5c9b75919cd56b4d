"""Name resolution and structural invariants for raw models.

``resolve`` checks every reference and well-formedness rule and returns a
:class:`ResolvedModel`: the unchanged model plus O(1) lookup tables. It
fails fast with a located exception on the first violation. Resolution is
idempotent; resolving a ``ResolvedModel`` re-checks the wrapped model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import SourceSpan
from .types import (
    ABSENT,
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
    FunctionBehavior,
    IntRange,
    IntV,
    LitPattern,
    Model,
    ParentPort,
    Port,
    PortType,
    RESERVED_STATE_NAME,
    RESERVED_WORDS,
    SubPort,
    Value,
    Variable,
    carrier,
)


class ModelError(Exception):
    """A located model defect found during resolution."""

    def __init__(self, location: str, message: str, span: SourceSpan | None = None):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message
        self.span = span


class UnknownReference(ModelError):
    def __init__(self, location: str, name: str, span: SourceSpan | None = None):
        super().__init__(location, f"unknown reference '{name}'", span)
        self.name = name


class DuplicateName(ModelError):
    def __init__(self, location: str, name: str, span: SourceSpan | None = None):
        super().__init__(location, f"duplicate name '{name}'", span)
        self.name = name


class InvalidModel(ModelError):
    pass


@dataclass
class ResolvedModel:
    """A checked model together with lookup tables for its namespaces."""

    model: Model
    types: dict[str, EnumType] = field(default_factory=dict)
    literals: dict[str, EnumType] = field(default_factory=dict)
    components: dict[str, Component] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ResolvedModel):
            return self.model == other.model
        return NotImplemented

    @property
    def name(self) -> str:
        return self.model.name

    @property
    def root(self) -> Component:
        return self.components[self.model.root]

    def component(self, name: str) -> Component:
        return self.components[name]

    def concrete(self, dtype: PortType) -> ConcreteType:
        """Materialize an enum reference into its declaration."""
        if isinstance(dtype, EnumRef):
            return self.types[dtype.name]
        return dtype

    def carrier_of(self, dtype: PortType) -> tuple[Value, ...]:
        return carrier(self.concrete(dtype))

    def ports(self, comp: Component) -> dict[str, Port]:
        return {p.name: p for p in comp.ports}

    def variables(self, comp: Component) -> dict[str, Variable]:
        if isinstance(comp.body, Automaton):
            return {v.name: v for v in comp.body.variables}
        return {}

    def literal_value(self, name: str) -> EnumV | None:
        et = self.literals.get(name)
        if et is None:
            return None
        return EnumV(et.name, name)


def resolve(model: Model | ResolvedModel) -> ResolvedModel:
    """Check every invariant of the model and index its namespaces."""
    if isinstance(model, ResolvedModel):
        model = model.model
    rm = ResolvedModel(model=model)
    _check_types(rm)
    _check_components(rm)
    _check_reference_graph(rm)
    return rm


# ---------------------------------------------------------------------------


def _check_types(rm: ResolvedModel) -> None:
    m = rm.model
    for et in m.types:
        loc = f"{m.name}.{et.name}"
        if et.name in RESERVED_WORDS:
            raise InvalidModel(loc, f"'{et.name}' is reserved", et.span)
        if et.name in rm.types or et.name in rm.literals:
            raise DuplicateName(m.name, et.name, et.span)
        if not et.literals:
            raise InvalidModel(loc, "enumeration needs at least one literal", et.span)
        for lit in et.literals:
            if lit in RESERVED_WORDS:
                raise InvalidModel(loc, f"literal '{lit}' is reserved", et.span)
            if lit in rm.literals or lit in rm.types:
                raise DuplicateName(loc, lit, et.span)
            rm.literals[lit] = et
        rm.types[et.name] = et


def _check_dtype(rm: ResolvedModel, dtype: PortType, loc: str, span: SourceSpan | None) -> None:
    if isinstance(dtype, EnumRef):
        if dtype.name not in rm.types:
            raise UnknownReference(loc, dtype.name, span)
    elif isinstance(dtype, IntRange):
        if dtype.lo > dtype.hi:
            raise InvalidModel(loc, f"empty integer range [{dtype.lo}..{dtype.hi}]", span)


def _value_in_carrier(rm: ResolvedModel, value: Value, dtype: PortType) -> bool:
    if isinstance(value, Absent):
        return False
    return value in rm.carrier_of(dtype)


def _check_components(rm: ResolvedModel) -> None:
    m = rm.model
    for comp in m.components:
        if comp.name in rm.components:
            raise DuplicateName(m.name, comp.name, comp.span)
        rm.components[comp.name] = comp
        _check_interface(rm, comp)
        if isinstance(comp.body, Automaton):
            _check_automaton(rm, comp, comp.body)
        elif isinstance(comp.body, FunctionBehavior):
            _check_function(rm, comp, comp.body)
        else:
            _check_composite(rm, comp, comp.body)
    if m.root not in rm.components:
        raise UnknownReference(m.name, m.root, m.span)


def _check_interface(rm: ResolvedModel, comp: Component) -> None:
    loc = f"{rm.model.name}.{comp.name}"
    seen: set[str] = set()
    for port in comp.ports:
        ploc = f"{loc}.{port.name}"
        if port.name == RESERVED_STATE_NAME:
            raise InvalidModel(ploc, "'st' is reserved for the lowered state variable", port.span)
        if port.name in seen:
            raise DuplicateName(loc, port.name, port.span)
        if port.name in rm.literals or port.name in rm.types:
            raise DuplicateName(ploc, port.name, port.span)
        seen.add(port.name)
        _check_dtype(rm, port.dtype, ploc, port.span)
        if not isinstance(port.init, Absent) and not _value_in_carrier(rm, port.init, port.dtype):
            raise InvalidModel(ploc, "initial value outside the port type", port.span)
    if not comp.is_composite and not comp.out_ports:
        raise InvalidModel(loc, "atomic component needs at least one output port", comp.span)


def _check_automaton(rm: ResolvedModel, comp: Component, auto: Automaton) -> None:
    loc = f"{rm.model.name}.{comp.name}"
    if not auto.states:
        raise InvalidModel(loc, "automaton needs at least one state", comp.span)
    states: set[str] = set()
    for st in auto.states:
        if st in states:
            raise DuplicateName(loc, st, comp.span)
        states.add(st)
    if auto.initial not in states:
        raise UnknownReference(loc, auto.initial, comp.span)

    port_names = {p.name for p in comp.ports}
    var_names: set[str] = set()
    for var in auto.variables:
        vloc = f"{loc}.{var.name}"
        if var.name == RESERVED_STATE_NAME:
            raise InvalidModel(vloc, "'st' is reserved for the lowered state variable", var.span)
        if var.name in var_names or var.name in port_names:
            raise DuplicateName(loc, var.name, var.span)
        if var.name in rm.literals or var.name in rm.types:
            raise DuplicateName(vloc, var.name, var.span)
        var_names.add(var.name)
        _check_dtype(rm, var.dtype, vloc, var.span)
        if isinstance(var.init, Absent) or not _value_in_carrier(rm, var.init, var.dtype):
            raise InvalidModel(vloc, "variable needs an initial value of its type", var.span)

    ins = {p.name: p for p in comp.in_ports}
    outs = {p.name: p for p in comp.out_ports}
    for i, tr in enumerate(auto.transitions, start=1):
        tloc = f"{loc}.transition#{i}"
        if tr.source not in states:
            raise UnknownReference(tloc, tr.source, tr.span)
        if tr.target not in states:
            raise UnknownReference(tloc, tr.target, tr.span)
        for pname, pat in tr.patterns.items():
            if pname not in ins:
                raise UnknownReference(tloc, pname, tr.span)
            if isinstance(pat, LitPattern) and not _value_in_carrier(rm, pat.value, ins[pname].dtype):
                raise InvalidModel(tloc, f"pattern value outside the type of '{pname}'", tr.span)
        for oname in tr.emissions:
            if oname not in outs:
                raise UnknownReference(tloc, oname, tr.span)
        for vname in tr.updates:
            if vname not in var_names:
                raise UnknownReference(tloc, vname, tr.span)


def _check_function(rm: ResolvedModel, comp: Component, fn: FunctionBehavior) -> None:
    loc = f"{rm.model.name}.{comp.name}"
    outs = {p.name for p in comp.out_ports}
    for oname in fn.emissions:
        if oname not in outs:
            raise UnknownReference(loc, oname, comp.span)
    missing = outs - set(fn.emissions)
    if missing:
        raise InvalidModel(loc, f"no emission for output port(s) {sorted(missing)}", comp.span)


def _check_composite(rm: ResolvedModel, comp: Component, body: Composite) -> None:
    loc = f"{rm.model.name}.{comp.name}"
    if not body.subs:
        raise InvalidModel(loc, "composite needs at least one subcomponent", comp.span)
    subs: dict[str, SubComponent] = {}
    for sub in body.subs:
        if sub.name in subs:
            raise DuplicateName(loc, sub.name, sub.span)
        subs[sub.name] = sub
        # Forward references are fine; existence is checked once all
        # components are indexed, in _check_reference_graph.

    ports = {p.name: p for p in comp.ports}
    chan_names: set[str] = set()
    # sink-side exclusivity bookkeeping
    sub_in_fed: dict[tuple[str, str], str] = {}
    parent_out_fed: dict[str, str] = {}
    sub_out_used: dict[tuple[str, str], str] = {}
    for ch in body.channels:
        cloc = f"{loc}.{ch.name}"
        if ch.name in chan_names or ch.name in ports:
            raise DuplicateName(loc, ch.name, ch.span)
        chan_names.add(ch.name)
        _check_dtype(rm, ch.dtype, cloc, ch.span)
        src = _endpoint_port(rm, comp, subs, ch.source, cloc, ch.span)
        snk = _endpoint_port(rm, comp, subs, ch.sink, cloc, ch.span)
        if isinstance(ch.source, ParentPort):
            if src.direction is not Direction.IN:
                raise InvalidModel(cloc, "channel source must produce messages", ch.span)
        else:
            if src.direction is not Direction.OUT:
                raise InvalidModel(cloc, "channel source must produce messages", ch.span)
            key = (ch.source.instance, ch.source.port)
            if key in sub_out_used:
                raise InvalidModel(cloc, f"output {key[0]}.{key[1]} already feeds channel '{sub_out_used[key]}'", ch.span)
            sub_out_used[key] = ch.name
        if isinstance(ch.sink, ParentPort):
            if isinstance(ch.source, ParentPort):
                raise InvalidModel(cloc, "channel may not connect two parent ports", ch.span)
            if snk.direction is not Direction.OUT:
                raise InvalidModel(cloc, "channel sink must consume messages", ch.span)
            if ch.sink.port in parent_out_fed:
                raise InvalidModel(cloc, f"output '{ch.sink.port}' already fed by channel '{parent_out_fed[ch.sink.port]}'", ch.span)
            parent_out_fed[ch.sink.port] = ch.name
        else:
            if snk.direction is not Direction.IN:
                raise InvalidModel(cloc, "channel sink must consume messages", ch.span)
            key = (ch.sink.instance, ch.sink.port)
            if key in sub_in_fed:
                raise InvalidModel(cloc, f"input {key[0]}.{key[1]} already fed by channel '{sub_in_fed[key]}' (fan-in)", ch.span)
            sub_in_fed[key] = ch.name
        if src.dtype != ch.dtype or snk.dtype != ch.dtype:
            raise InvalidModel(cloc, "channel type differs from its endpoint ports", ch.span)

    for port in comp.ports:
        if port.direction is Direction.OUT and port.name not in parent_out_fed:
            raise InvalidModel(f"{loc}.{port.name}", "composite output port has no feeding channel", port.span)
    # Sub port coverage needs the sub components' interfaces; they may be
    # declared later in the file, so it runs in _check_reference_graph.


def _endpoint_port(
    rm: ResolvedModel,
    comp: Component,
    subs: dict[str, SubComponent],
    ep: ParentPort | SubPort,
    loc: str,
    span: SourceSpan | None,
) -> Port:
    if isinstance(ep, ParentPort):
        for p in comp.ports:
            if p.name == ep.port:
                return p
        raise UnknownReference(loc, ep.port, span)
    sub = subs.get(ep.instance)
    if sub is None:
        raise UnknownReference(loc, ep.instance, span)
    target = _find_component(rm.model, sub.component)
    if target is None:
        raise UnknownReference(loc, sub.component, span)
    for p in target.ports:
        if p.name == ep.port:
            return p
    raise UnknownReference(loc, f"{ep.instance}.{ep.port}", span)


def _find_component(model: Model, name: str) -> Component | None:
    for c in model.components:
        if c.name == name:
            return c
    return None


def _check_reference_graph(rm: ResolvedModel) -> None:
    """Sub references resolve, port wiring is complete, composition is acyclic."""
    m = rm.model
    for comp in m.components:
        if not isinstance(comp.body, Composite):
            continue
        loc = f"{m.name}.{comp.name}"
        fed_sub_ins = set()
        used_sub_outs = set()
        for ch in comp.body.channels:
            if isinstance(ch.sink, SubPort):
                fed_sub_ins.add((ch.sink.instance, ch.sink.port))
            if isinstance(ch.source, SubPort):
                used_sub_outs.add((ch.source.instance, ch.source.port))
        for sub in comp.body.subs:
            target = rm.components.get(sub.component)
            if target is None:
                raise UnknownReference(f"{loc}.{sub.name}", sub.component, sub.span)
            for p in target.ports:
                key = (sub.name, p.name)
                if p.direction is Direction.IN and key not in fed_sub_ins:
                    raise InvalidModel(loc, f"input {sub.name}.{p.name} has no feeding channel", sub.span)
                if p.direction is Direction.OUT and key not in used_sub_outs:
                    raise InvalidModel(loc, f"output {sub.name}.{p.name} feeds no channel", sub.span)

    # Acyclic composition, depth-first over component references.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {c.name: WHITE for c in m.components}

    def visit(name: str) -> None:
        color[name] = GRAY
        comp = rm.components[name]
        if isinstance(comp.body, Composite):
            for sub in comp.body.subs:
                ref = sub.component
                if color[ref] == GRAY:
                    raise InvalidModel(f"{m.name}.{name}", f"recursive composition through '{ref}'", comp.span)
                if color[ref] == WHITE:
                    visit(ref)
        color[name] = BLACK

    for c in m.components:
        if color[c.name] == WHITE:
            visit(c.name)
