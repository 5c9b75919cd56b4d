"""Time-synchronous simulation of validated models.

One global clock; every port or channel carries at most one message per
slot. Weakly causal components react within the slot, strongly causal
ones publish the previous step's emissions (their declared port initial
values at slot 0). Composite components are flattened to their atomic
instances before running; within a slot the instances fire in a stable
topological order of the instantaneous-dependency graph, where only
channels leaving weakly causal atoms count as same-slot edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..model import (
    ABSENT,
    Absent,
    AbsentPattern,
    Automaton,
    Causality,
    Component,
    Composite,
    Direction,
    FunctionBehavior,
    LitPattern,
    ParentPort,
    Port,
    SubPort,
    Transition,
    Value,
)
from ..model.resolve import ResolvedModel
from .exprs import clamp, eval_expr, is_true


class CausalityCycle(Exception):
    """Instantaneous feedback: no schedule exists for the network."""

    def __init__(self, instances: list[str]):
        super().__init__("zero-delay cycle through " + ", ".join(instances))
        self.instances = instances


@dataclass(frozen=True)
class Snapshot:
    """Control state and data state of one automaton instance."""

    state: str
    vars: dict[str, Value] = field(default_factory=dict)


@dataclass(frozen=True)
class Trace:
    """A finite history: T slot valuations and T+1 state snapshots."""

    model: str
    root: str
    horizon: int
    identities: tuple[str, ...]
    slots: tuple[dict[str, Value], ...]
    states: tuple[dict[str, Snapshot], ...]


@dataclass(frozen=True)
class FlatInstance:
    path: str
    component: Component
    in_keys: dict[str, str]
    out_keys: dict[str, str]


@dataclass(frozen=True)
class FlatNetwork:
    root: Component
    instances: tuple[FlatInstance, ...]
    order: tuple[int, ...]  # evaluation order, indices into instances
    identities: tuple[str, ...]


def flatten(rm: ResolvedModel, component: str) -> FlatNetwork:
    """Expand a component into its atomic instances and stream keys."""
    comp = rm.component(component)
    instances: list[FlatInstance] = []
    channel_keys: list[str] = []

    def instantiate(path: str, c: Component, portmap: dict[str, str]) -> None:
        if not isinstance(c.body, Composite):
            instances.append(
                FlatInstance(
                    path=path,
                    component=c,
                    in_keys={p.name: portmap[p.name] for p in c.in_ports},
                    out_keys={p.name: portmap[p.name] for p in c.out_ports},
                )
            )
            return
        prefix = "" if path == "" else f"{path}/"
        keys: dict[str, str] = {}
        for ch in c.body.channels:
            if isinstance(ch.source, ParentPort):
                keys[ch.name] = portmap[ch.source.port]
            elif isinstance(ch.sink, ParentPort):
                keys[ch.name] = portmap[ch.sink.port]
            else:
                keys[ch.name] = f"{prefix}{ch.name}"
                channel_keys.append(keys[ch.name])
        by_sink = {
            (ch.sink.instance, ch.sink.port): ch.name
            for ch in c.body.channels
            if isinstance(ch.sink, SubPort)
        }
        by_source = {
            (ch.source.instance, ch.source.port): ch.name
            for ch in c.body.channels
            if isinstance(ch.source, SubPort)
        }
        for sub in c.body.subs:
            target = rm.component(sub.component)
            submap: dict[str, str] = {}
            for p in target.ports:
                if p.direction is Direction.IN:
                    submap[p.name] = keys[by_sink[(sub.name, p.name)]]
                else:
                    submap[p.name] = keys[by_source[(sub.name, p.name)]]
            instantiate(f"{prefix}{sub.name}", target, submap)

    if isinstance(comp.body, Composite):
        rootmap = {p.name: p.name for p in comp.ports}
        instantiate("", comp, rootmap)
    else:
        instantiate(comp.name, comp, {p.name: p.name for p in comp.ports})

    order = _schedule(instances)
    identities = (
        tuple(p.name for p in comp.in_ports)
        + tuple(channel_keys)
        + tuple(p.name for p in comp.out_ports)
    )
    return FlatNetwork(root=comp, instances=tuple(instances), order=order, identities=identities)


def _schedule(instances: list[FlatInstance]) -> tuple[int, ...]:
    """Stable topological order over same-slot dependencies."""
    producer: dict[str, int] = {}
    for i, inst in enumerate(instances):
        if inst.component.causality is Causality.WEAK:
            for key in inst.out_keys.values():
                producer[key] = i
    dependents: dict[int, list[int]] = {i: [] for i in range(len(instances))}
    indegree = [0] * len(instances)
    for i, inst in enumerate(instances):
        sources = {producer[key] for key in inst.in_keys.values() if key in producer}
        sources.discard(i)
        for s in sources:
            dependents[s].append(i)
            indegree[i] += 1
    ready = [i for i in range(len(instances)) if indegree[i] == 0]
    order: list[int] = []
    while ready:
        ready.sort()
        i = ready.pop(0)
        order.append(i)
        for d in dependents[i]:
            indegree[d] -= 1
            if indegree[d] == 0:
                ready.append(d)
    if len(order) != len(instances):
        stuck = [instances[i].path for i in range(len(instances)) if indegree[i] > 0]
        raise CausalityCycle(stuck)
    return tuple(order)


# ---------------------------------------------------------------------------


def initial_snapshot(rm: ResolvedModel, comp: Component) -> Snapshot | None:
    if isinstance(comp.body, Automaton):
        return Snapshot(
            state=comp.body.initial,
            vars={v.name: v.init for v in comp.body.variables},
        )
    return None


def transition_enabled(
    rm: ResolvedModel, comp: Component, tr: Transition, snap: Snapshot | None, inputs: Mapping[str, Value]
) -> bool:
    if snap is not None and tr.source != snap.state:
        return False
    for port in comp.in_ports:
        value = inputs.get(port.name, ABSENT)
        pat = tr.patterns.get(port.name)
        if pat is None:
            # An unmentioned input still has to carry some message.
            if isinstance(value, Absent):
                return False
        elif isinstance(pat, AbsentPattern):
            if not isinstance(value, Absent):
                return False
        elif isinstance(pat, LitPattern):
            if value != pat.value:
                return False
        else:  # wildcard
            if isinstance(value, Absent):
                return False
    if tr.guard is not None:
        env = _env(rm, snap, inputs)
        if not is_true(eval_expr(tr.guard, env)):
            return False
    return True


def _env(rm: ResolvedModel, snap: Snapshot | None, inputs: Mapping[str, Value]) -> dict[str, Value]:
    env: dict[str, Value] = {lit: rm.literal_value(lit) for lit in rm.literals}  # type: ignore[misc]
    env.update(inputs)
    if snap is not None:
        env.update(snap.vars)
    return env


def step(
    rm: ResolvedModel,
    comp: Component,
    snap: Snapshot | None,
    inputs: Mapping[str, Value],
) -> tuple[dict[str, Value], Snapshot | None]:
    """One reaction of an atomic component.

    Returns the emitted output valuation and the successor snapshot. For
    weakly causal components the outputs belong to the current slot; for
    strongly causal ones the caller publishes them one slot later, with
    the declared port initial values filling slot 0. When no transition
    is enabled the component stutters: outputs stay empty, nothing moves.
    """
    body = comp.body
    outputs: dict[str, Value] = {p.name: ABSENT for p in comp.out_ports}
    if isinstance(body, FunctionBehavior):
        env = _env(rm, None, inputs)
        for port in comp.out_ports:
            value = eval_expr(body.emissions[port.name], env)
            outputs[port.name] = clamp(value, rm.concrete(port.dtype))
        return outputs, None
    if not isinstance(body, Automaton):
        raise ValueError(f"step() needs an atomic component, got composite '{comp.name}'")
    assert snap is not None
    ports = rm.ports(comp)
    variables = rm.variables(comp)
    for tr in body.transitions:
        if transition_enabled(rm, comp, tr, snap, inputs):
            env = _env(rm, snap, inputs)
            for name, expr in tr.emissions.items():
                outputs[name] = clamp(eval_expr(expr, env), rm.concrete(ports[name].dtype))
            new_vars = dict(snap.vars)
            for name, expr in tr.updates.items():
                new_vars[name] = clamp(eval_expr(expr, env), rm.concrete(variables[name].dtype))
            return outputs, Snapshot(state=tr.target, vars=new_vars)
    return outputs, snap  # stutter


def run(
    rm: ResolvedModel,
    component: str,
    inputs: Sequence[Mapping[str, Value]],
    horizon: int | None = None,
) -> Trace:
    """Simulate a component over a finite input history."""
    if horizon is None:
        horizon = len(inputs)
    if horizon != len(inputs):
        raise ValueError(f"horizon {horizon} does not match {len(inputs)} input slots")
    flat = flatten(rm, component)

    snaps: dict[str, Snapshot] = {}
    buffers: dict[str, dict[str, Value]] = {}
    for inst in flat.instances:
        snap = initial_snapshot(rm, inst.component)
        if snap is not None:
            snaps[inst.path] = snap
        if inst.component.causality is Causality.STRONG:
            buffers[inst.path] = {p.name: p.init for p in inst.component.out_ports}

    state_history: list[dict[str, Snapshot]] = [dict(snaps)]
    slot_history: list[dict[str, Value]] = []

    for t in range(horizon):
        values: dict[str, Value] = {}
        for port in flat.root.in_ports:
            values[port.name] = inputs[t].get(port.name, ABSENT)
        for inst in flat.instances:
            if inst.component.causality is Causality.STRONG:
                for pname, key in inst.out_keys.items():
                    values[key] = buffers[inst.path][pname]
        for i in flat.order:
            inst = flat.instances[i]
            local_inputs = {pname: values.get(key, ABSENT) for pname, key in inst.in_keys.items()}
            out, snap2 = step(rm, inst.component, snaps.get(inst.path), local_inputs)
            if inst.component.causality is Causality.WEAK:
                for pname, key in inst.out_keys.items():
                    values[key] = out[pname]
            else:
                buffers[inst.path] = out
            if snap2 is not None:
                snaps[inst.path] = snap2
        slot_history.append({key: values.get(key, ABSENT) for key in flat.identities})
        state_history.append(dict(snaps))

    return Trace(
        model=rm.name,
        root=component,
        horizon=horizon,
        identities=flat.identities,
        slots=tuple(slot_history),
        states=tuple(state_history),
    )
