"""Structured-data (JSON) frontend.

Accepts the interchange schema shipped as docs/model.schema and yields the
same raw model the DSL frontend would produce for equivalent source. All
types, values, patterns and expressions inside the document use the DSL
surface syntax, so both frontends share one reading of every snippet.
"""

from __future__ import annotations

import json
from typing import Any

from ..diagnostics import Diagnostic, SourceSpan, error, whole_file_span
from ..model import (
    ABSENT,
    Automaton,
    Causality,
    Channel,
    Component,
    Composite,
    Direction,
    EnumType,
    Expr,
    FunctionBehavior,
    LitPattern,
    Model,
    NO_MESSAGE,
    ParentPort,
    Pattern,
    Port,
    SubComponent,
    SubPort,
    Transition,
    Variable,
    WILDCARD,
)
from .parser import ParseError, parse_expression_text, parse_type_text, parse_value_text

_BEHAVIOR_KEYS = ("automaton", "function", "composite")


class _SchemaError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def parse_interchange(text: str, file: str = "<input>") -> tuple[Model | None, list[Diagnostic]]:
    """Parse an interchange document into a raw model, or into diagnostics."""
    base = whole_file_span(file)
    try:
        doc = json.loads(text, object_pairs_hook=_strict_pairs)
    except json.JSONDecodeError as e:
        span = SourceSpan(file, e.lineno, e.colno)
        return None, [error(span, "bad-json", e.msg)]
    except _DuplicateKey as e:
        return None, [error(base, "duplicate-key", f"duplicate object key '{e.key}'")]
    try:
        model = _model(doc, base)
    except _SchemaError as e:
        return None, [error(base, "schema", f"{e.path}: {e.message}")]
    except ParseError as e:
        return None, [error(e.span, e.code, e.message)]
    return model, []


class _DuplicateKey(Exception):
    def __init__(self, key: str):
        super().__init__(key)
        self.key = key


def _strict_pairs(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise _DuplicateKey(key)
        out[key] = value
    return out


def _expect(obj: Any, path: str, kind: type, what: str) -> Any:
    if not isinstance(obj, kind):
        raise _SchemaError(path, f"expected {what}")
    return obj


def _field(obj: dict, path: str, name: str, kind: type, what: str) -> Any:
    if name not in obj:
        raise _SchemaError(path, f"missing required field '{name}'")
    return _expect(obj[name], f"{path}.{name}", kind, what)


def _model(doc: Any, base: SourceSpan) -> Model:
    top = _expect(doc, "$", dict, "an object")
    name = _field(top, "$", "name", str, "a string")
    root = _field(top, "$", "root", str, "a string")
    types = tuple(
        _enum_type(item, f"$.types[{i}]")
        for i, item in enumerate(_field(top, "$", "types", list, "an array") if "types" in top else [])
    )
    components = tuple(
        _component(item, f"$.components[{i}]", base)
        for i, item in enumerate(_field(top, "$", "components", list, "an array"))
    )
    return Model(name=name, types=types, components=components, root=root, span=base)


def _enum_type(obj: Any, path: str) -> EnumType:
    item = _expect(obj, path, dict, "an object")
    name = _field(item, path, "name", str, "a string")
    literals = _field(item, path, "literals", list, "an array")
    for i, lit in enumerate(literals):
        _expect(lit, f"{path}.literals[{i}]", str, "a string")
    return EnumType(name=name, literals=tuple(literals))


def _component(obj: Any, path: str, base: SourceSpan) -> Component:
    item = _expect(obj, path, dict, "an object")
    name = _field(item, path, "name", str, "a string")
    causality = Causality.STRONG
    if "causality" in item:
        raw = _expect(item["causality"], f"{path}.causality", str, "a string")
        try:
            causality = Causality(raw)
        except ValueError:
            raise _SchemaError(f"{path}.causality", f"expected 'weak' or 'strong', got {raw!r}") from None
    ports = tuple(
        _port(p, f"{path}.ports[{i}]", base) for i, p in enumerate(_field(item, path, "ports", list, "an array"))
    )
    present = [k for k in _BEHAVIOR_KEYS if k in item]
    if len(present) != 1:
        raise _SchemaError(path, f"component needs exactly one of {_BEHAVIOR_KEYS}")
    kind = present[0]
    port_types = {p.name: p.dtype for p in ports}
    if kind == "automaton":
        body = _automaton(item["automaton"], f"{path}.automaton", port_types, base)
    elif kind == "function":
        body = _function(item["function"], f"{path}.function", base)
    else:
        body = _composite(item["composite"], f"{path}.composite", base)
    return Component(name=name, causality=causality, ports=ports, body=body, span=base)


def _port(obj: Any, path: str, base: SourceSpan) -> Port:
    item = _expect(obj, path, dict, "an object")
    name = _field(item, path, "name", str, "a string")
    raw_dir = _field(item, path, "direction", str, "a string")
    try:
        direction = Direction(raw_dir)
    except ValueError:
        raise _SchemaError(f"{path}.direction", f"expected 'in' or 'out', got {raw_dir!r}") from None
    dtype = parse_type_text(_field(item, path, "type", str, "a string"), base)
    init = ABSENT
    if "init" in item:
        init = parse_value_text(_expect(item["init"], f"{path}.init", str, "a string"), dtype, base)
    return Port(name=name, direction=direction, dtype=dtype, init=init, span=base)


def _automaton(obj: Any, path: str, port_types: dict, base: SourceSpan) -> Automaton:
    item = _expect(obj, path, dict, "an object")
    variables = []
    for i, v in enumerate(item.get("vars", [])):
        vpath = f"{path}.vars[{i}]"
        ventry = _expect(v, vpath, dict, "an object")
        vname = _field(ventry, vpath, "name", str, "a string")
        vtype = parse_type_text(_field(ventry, vpath, "type", str, "a string"), base)
        vinit = parse_value_text(_field(ventry, vpath, "init", str, "a string"), vtype, base)
        variables.append(Variable(name=vname, dtype=vtype, init=vinit, span=base))
    states = _field(item, path, "states", list, "an array")
    for i, st in enumerate(states):
        _expect(st, f"{path}.states[{i}]", str, "a string")
    initial = _field(item, path, "initial", str, "a string")
    transitions = tuple(
        _transition(t, f"{path}.transitions[{i}]", port_types, base)
        for i, t in enumerate(item.get("transitions", []))
    )
    return Automaton(states=tuple(states), initial=initial, variables=tuple(variables), transitions=transitions)


def _transition(obj: Any, path: str, port_types: dict, base: SourceSpan) -> Transition:
    item = _expect(obj, path, dict, "an object")
    source = _field(item, path, "from", str, "a string")
    target = _field(item, path, "to", str, "a string")
    patterns: dict[str, Pattern] = {}
    for pname, raw in _expect(item.get("patterns", {}), f"{path}.patterns", dict, "an object").items():
        text = _expect(raw, f"{path}.patterns.{pname}", str, "a string")
        patterns[pname] = _pattern(text, pname, port_types, f"{path}.patterns.{pname}", base)
    guard: Expr | None = None
    if item.get("guard") is not None:
        guard = parse_expression_text(_expect(item["guard"], f"{path}.guard", str, "a string"), base)
    emissions = _bindings(item.get("emit", {}), f"{path}.emit", base)
    updates = _bindings(item.get("set", {}), f"{path}.set", base)
    return Transition(
        source=source,
        target=target,
        patterns=patterns,
        guard=guard,
        emissions=emissions,
        updates=updates,
        span=base,
    )


def _pattern(text: str, pname: str, port_types: dict, path: str, base: SourceSpan) -> Pattern:
    if text == "*":
        return WILDCARD
    if text == "eps":
        return NO_MESSAGE
    dtype = port_types.get(pname)
    if dtype is None:
        raise _SchemaError(path, f"unknown input port '{pname}'")
    return LitPattern(parse_value_text(text, dtype, base))


def _bindings(obj: Any, path: str, base: SourceSpan) -> dict[str, Expr]:
    out: dict[str, Expr] = {}
    for name, raw in _expect(obj, path, dict, "an object").items():
        text = _expect(raw, f"{path}.{name}", str, "a string")
        out[name] = parse_expression_text(text, base)
    return out


def _function(obj: Any, path: str, base: SourceSpan) -> FunctionBehavior:
    item = _expect(obj, path, dict, "an object")
    return FunctionBehavior(emissions=_bindings(item.get("emit", {}), f"{path}.emit", base))


def _composite(obj: Any, path: str, base: SourceSpan) -> Composite:
    item = _expect(obj, path, dict, "an object")
    subs = []
    for i, s in enumerate(_field(item, path, "subs", list, "an array")):
        spath = f"{path}.subs[{i}]"
        entry = _expect(s, spath, dict, "an object")
        subs.append(
            SubComponent(
                name=_field(entry, spath, "name", str, "a string"),
                component=_field(entry, spath, "component", str, "a string"),
                span=base,
            )
        )
    channels = []
    for i, c in enumerate(item.get("channels", [])):
        cpath = f"{path}.channels[{i}]"
        entry = _expect(c, cpath, dict, "an object")
        channels.append(
            Channel(
                name=_field(entry, cpath, "name", str, "a string"),
                dtype=parse_type_text(_field(entry, cpath, "type", str, "a string"), base),
                source=_endpoint(_field(entry, cpath, "from", str, "a string")),
                sink=_endpoint(_field(entry, cpath, "to", str, "a string")),
                span=base,
            )
        )
    return Composite(subs=tuple(subs), channels=tuple(channels))


def _endpoint(text: str) -> ParentPort | SubPort:
    if "." in text:
        instance, _, port = text.partition(".")
        return SubPort(instance=instance, port=port)
    return ParentPort(port=text)
