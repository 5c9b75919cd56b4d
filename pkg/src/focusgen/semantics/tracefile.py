"""Line-oriented trace and input-history files.

Trace export, one slot per line::

    trace <model> <component> horizon <T>
    init; state=<path>:<state>; <path>.<var>=<value> ...
    <t>; <key>=<value>; ...; state=<path>:<state>; <path>.<var>=<value> ...

Keys are the component's ports plus the network's internal channels. The
state cells on a slot line show the snapshot after that slot. Input files
use the same cell syntax with only input ports; a port missing from a
line is an empty slot. ``//`` comments and blank lines are ignored.
"""

from __future__ import annotations

from ..model import ABSENT, Absent, Automaton, BoolType, BoolV, EnumType, IntRange, IntV, EnumV, Value
from ..model.resolve import ResolvedModel
from ..frontend.printer import format_value
from .simulate import FlatNetwork, Snapshot, Trace, flatten


class TraceFormatError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def format_trace(trace: Trace, rm: ResolvedModel) -> str:
    flat = flatten(rm, trace.root)
    lines = [f"trace {trace.model} {trace.root} horizon {trace.horizon}"]
    init_cells = _format_states(trace.states[0], flat)
    lines.append(f"init; {init_cells}" if init_cells else "init")
    for t in range(trace.horizon):
        cells = [str(t)]
        for key in trace.identities:
            cells.append(f"{key}={format_value(trace.slots[t][key])}")
        state_part = _format_states(trace.states[t + 1], flat)
        if state_part:
            cells.append(state_part)
        lines.append("; ".join(cells))
    return "\n".join(lines) + "\n"


def _format_states(states: dict[str, Snapshot], flat: FlatNetwork) -> str:
    cells: list[str] = []
    for inst in flat.instances:
        snap = states.get(inst.path)
        if snap is None:
            continue
        cells.append(f"state={inst.path}:{snap.state}")
        auto = inst.component.body
        assert isinstance(auto, Automaton)
        for var in auto.variables:
            cells.append(f"{inst.path}.{var.name}={format_value(snap.vars[var.name])}")
    return "; ".join(cells)


def value_from_text(text: str, dtype: BoolType | IntRange | EnumType, line: int) -> Value:
    if text == "eps":
        return ABSENT
    if isinstance(dtype, BoolType):
        if text in ("true", "false"):
            return BoolV(text == "true")
        raise TraceFormatError(line, f"'{text}' is not a boolean")
    if isinstance(dtype, IntRange):
        try:
            return IntV(int(text))
        except ValueError:
            raise TraceFormatError(line, f"'{text}' is not an integer") from None
    if text in dtype.literals:
        return EnumV(dtype.name, text)
    raise TraceFormatError(line, f"'{text}' is not a literal of {dtype.name}")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def parse_inputs(text: str, rm: ResolvedModel, component: str) -> list[dict[str, Value]]:
    """Read an input history for a component; returns one valuation per slot."""
    comp = rm.component(component)
    port_types = {p.name: rm.concrete(p.dtype) for p in comp.in_ports}
    slots: list[dict[str, Value]] = []
    for lineno, line in _content_lines(text):
        cells = [c.strip() for c in line.split(";")]
        try:
            t = int(cells[0])
        except ValueError:
            raise TraceFormatError(lineno, f"expected a slot index, found '{cells[0]}'") from None
        if t != len(slots):
            raise TraceFormatError(lineno, f"slot {len(slots)} expected, found {t}")
        valuation = {name: ABSENT for name in port_types}
        for cell in cells[1:]:
            if not cell:
                continue
            name, eq, value = cell.partition("=")
            name = name.strip()
            if not eq:
                raise TraceFormatError(lineno, f"expected 'port=value', found '{cell}'")
            if name not in port_types:
                raise TraceFormatError(lineno, f"'{name}' is not an input port of {component}")
            valuation[name] = value_from_text(value.strip(), port_types[name], lineno)
        slots.append(valuation)
    return slots


def parse_trace(text: str, rm: ResolvedModel) -> Trace:
    """Read a trace export back into a Trace (used to replay histories)."""
    lines = _content_lines(text)
    if not lines:
        raise TraceFormatError(1, "empty trace")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 5 or parts[0] != "trace" or parts[3] != "horizon":
        raise TraceFormatError(lineno, "expected 'trace <model> <component> horizon <T>'")
    model_name, root = parts[1], parts[2]
    if model_name != rm.name:
        raise TraceFormatError(lineno, f"trace belongs to model '{model_name}', not '{rm.name}'")
    try:
        horizon = int(parts[4])
    except ValueError:
        raise TraceFormatError(lineno, f"bad horizon '{parts[4]}'") from None
    if root not in rm.components:
        raise TraceFormatError(lineno, f"unknown component '{root}'")
    flat = flatten(rm, root)
    key_types = _key_types(rm, flat)

    body = lines[1:]
    if len(body) != horizon + 1:
        raise TraceFormatError(lineno, f"expected {horizon + 1} slot lines, found {len(body)}")
    init_no, init_line = body[0]
    cells = [c.strip() for c in init_line.split(";")]
    if cells[0] != "init":
        raise TraceFormatError(init_no, "expected the 'init' snapshot line")
    states = [_parse_states(cells[1:], rm, flat, init_no)]
    slots = []
    for t in range(horizon):
        no, line = body[t + 1]
        cells = [c.strip() for c in line.split(";")]
        if cells[0] != str(t):
            raise TraceFormatError(no, f"expected slot {t}, found '{cells[0]}'")
        value_cells = [c for c in cells[1:] if c and not c.startswith("state=") and "." not in c.split("=", 1)[0]]
        state_cells = [c for c in cells[1:] if c.startswith("state=") or "." in c.split("=", 1)[0]]
        valuation: dict[str, Value] = {}
        for cell in value_cells:
            name, _, value = cell.partition("=")
            name = name.strip()
            if name not in key_types:
                raise TraceFormatError(no, f"unknown stream '{name}'")
            valuation[name] = value_from_text(value.strip(), key_types[name], no)
        missing = [k for k in flat.identities if k not in valuation]
        if missing:
            raise TraceFormatError(no, f"missing value(s) for {', '.join(missing)}")
        slots.append(valuation)
        states.append(_parse_states(state_cells, rm, flat, no))
    return Trace(
        model=rm.name,
        root=root,
        horizon=horizon,
        identities=flat.identities,
        slots=tuple(slots),
        states=tuple(states),
    )


def _key_types(rm: ResolvedModel, flat: FlatNetwork):
    key_types = {}
    for port in flat.root.ports:
        key_types[port.name] = rm.concrete(port.dtype)
    for inst in flat.instances:
        for pname, key in list(inst.in_keys.items()) + list(inst.out_keys.items()):
            port = rm.ports(inst.component)[pname]
            key_types.setdefault(key, rm.concrete(port.dtype))
    return key_types


def _parse_states(cells: list[str], rm: ResolvedModel, flat: FlatNetwork, lineno: int) -> dict[str, Snapshot]:
    expected: dict[str, Automaton] = {}
    for inst in flat.instances:
        if isinstance(inst.component.body, Automaton):
            expected[inst.path] = inst.component.body
    states: dict[str, str] = {}
    vars_by_path: dict[str, dict[str, Value]] = {path: {} for path in expected}
    for cell in cells:
        if not cell:
            continue
        if cell.startswith("state="):
            path, _, state = cell[len("state=") :].partition(":")
            if path not in expected:
                raise TraceFormatError(lineno, f"unknown automaton instance '{path}'")
            states[path] = state
        else:
            target, _, value = cell.partition("=")
            path, _, vname = target.rpartition(".")
            if path not in expected:
                raise TraceFormatError(lineno, f"unknown automaton instance '{path}'")
            inst = next(i for i in flat.instances if i.path == path)
            var = rm.variables(inst.component).get(vname)
            if var is None:
                raise TraceFormatError(lineno, f"unknown variable '{target}'")
            vars_by_path[path][vname] = value_from_text(value.strip(), rm.concrete(var.dtype), lineno)
    out: dict[str, Snapshot] = {}
    for path, auto in expected.items():
        if path not in states:
            raise TraceFormatError(lineno, f"missing state for instance '{path}'")
        if auto.states and states[path] not in auto.states:
            raise TraceFormatError(lineno, f"'{states[path]}' is not a state of '{path}'")
        missing = [v.name for v in auto.variables if v.name not in vars_by_path[path]]
        if missing:
            raise TraceFormatError(lineno, f"missing variable value(s) for {path}: {', '.join(missing)}")
        out[path] = Snapshot(state=states[path], vars=vars_by_path[path])
    return out
