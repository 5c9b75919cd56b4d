"""Seeded random model generator for the property suites.

Produces structurally valid raw models within the finiteness caps: at
most four states, two input ports, carriers of three. Names are drawn
from disjoint pools so the global uniqueness rules hold by construction.
"""

from __future__ import annotations

import random

from focusgen.model import (
    ABSENT,
    Automaton,
    BOOL,
    Binop,
    BoolType,
    BoolV,
    Causality,
    Channel,
    Component,
    Composite,
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
    Port,
    Ref,
    SubComponent,
    SubPort,
    Transition,
    Unop,
    Value,
    Variable,
    WILDCARD,
    carrier,
)


def gen_model(rng: random.Random, index: int = 0) -> Model:
    gen = _Gen(rng, index)
    return gen.model()


class _Gen:
    def __init__(self, rng: random.Random, index: int):
        self.rng = rng
        self.index = index
        self.enums: list[EnumType] = []

    def model(self) -> Model:
        rng = self.rng
        for i in range(rng.randint(0, 2)):
            literals = tuple(f"l{self.index}_{i}_{k}" for k in range(rng.randint(1, 3)))
            self.enums.append(EnumType(name=f"T{self.index}_{i}", literals=literals))
        components = [self.component(i) for i in range(rng.randint(1, 2))]
        if rng.random() < 0.4:
            components.extend(self.chain(len(components)))
        root = rng.choice(components).name
        return Model(
            name=f"M{self.index}",
            types=tuple(self.enums),
            components=tuple(components),
            root=root,
        )

    # -- types and values ----------------------------------------------------

    def dtype(self):
        choices = [BOOL, IntRange(0, self.rng.randint(0, 2))]
        if self.enums:
            choices.append(EnumRef(self.rng.choice(self.enums).name))
        return self.rng.choice(choices)

    def concrete(self, dtype):
        if isinstance(dtype, EnumRef):
            return next(e for e in self.enums if e.name == dtype.name)
        return dtype

    def value(self, dtype) -> Value:
        return self.rng.choice(carrier(self.concrete(dtype)))

    # -- components ----------------------------------------------------------

    def component(self, i: int) -> Component:
        rng = self.rng
        name = f"C{self.index}_{i}"
        causality = rng.choice((Causality.WEAK, Causality.STRONG))
        ports = []
        for k in range(rng.randint(0, 2)):
            ports.append(Port(name=f"p{k}", direction=Direction.IN, dtype=self.dtype()))
        for k in range(rng.randint(1, 2)):
            dtype = self.dtype()
            init = self.value(dtype) if rng.random() < 0.6 else ABSENT
            ports.append(Port(name=f"q{k}", direction=Direction.OUT, dtype=dtype, init=init))
        comp_ports = tuple(ports)
        if rng.random() < 0.3:
            body = self.function(comp_ports)
        else:
            body = self.automaton(comp_ports)
        return Component(name=name, causality=causality, ports=comp_ports, body=body)

    def function(self, ports: tuple[Port, ...]) -> FunctionBehavior:
        ins = [p for p in ports if p.direction is Direction.IN]
        emissions = {}
        for p in ports:
            if p.direction is Direction.OUT:
                emissions[p.name] = self.expr(p.dtype, ins, [], depth=1)
        return FunctionBehavior(emissions=emissions)

    def automaton(self, ports: tuple[Port, ...]) -> Automaton:
        rng = self.rng
        states = tuple(f"S{k}" for k in range(rng.randint(1, 4)))
        variables = tuple(
            Variable(name=f"v{k}", dtype=(d := self.dtype()), init=self.value(d))
            for k in range(rng.randint(0, 2))
        )
        transitions = []
        ins = [p for p in ports if p.direction is Direction.IN]
        outs = [p for p in ports if p.direction is Direction.OUT]
        for _ in range(rng.randint(0, 4)):
            transitions.append(self.transition(states, ins, outs, variables))
        return Automaton(
            states=states,
            initial=rng.choice(states),
            variables=variables,
            transitions=tuple(transitions),
        )

    def transition(self, states, ins, outs, variables) -> Transition:
        rng = self.rng
        patterns = {}
        blocked: set[str] = set()
        for p in ins:
            roll = rng.random()
            if roll < 0.35:
                continue  # unmentioned: any present message
            if roll < 0.55:
                patterns[p.name] = WILDCARD
            elif roll < 0.7:
                patterns[p.name] = NO_MESSAGE
                blocked.add(p.name)
            else:
                patterns[p.name] = LitPattern(self.value(p.dtype))
        readable = [p for p in ins if p.name not in blocked]
        guard = self.guard(readable, variables) if rng.random() < 0.5 else None
        emissions = {}
        for p in outs:
            if rng.random() < 0.7:
                emissions[p.name] = self.expr(p.dtype, readable, variables, depth=1)
        updates = {}
        for v in variables:
            if rng.random() < 0.5:
                updates[v.name] = self.expr(v.dtype, readable, variables, depth=1)
        return Transition(
            source=rng.choice(states),
            target=rng.choice(states),
            patterns=patterns,
            guard=guard,
            emissions=emissions,
            updates=updates,
        )

    # -- expressions -----------------------------------------------------------

    def expr(self, dtype, readable_ports, variables, depth: int) -> Expr:
        rng = self.rng
        concrete = self.concrete(dtype)
        same_type_reads = [p.name for p in readable_ports if self.concrete(p.dtype) == concrete]
        same_type_reads += [v.name for v in variables if self.concrete(v.dtype) == concrete]
        choices = ["lit"] + (["read"] if same_type_reads else [])
        if depth > 0:
            if isinstance(concrete, IntRange):
                choices.append("arith")
            if isinstance(concrete, BoolType):
                choices += ["not", "cmp"]
        kind = rng.choice(choices)
        if kind == "read":
            return Ref(rng.choice(same_type_reads))
        if kind == "arith":
            return Binop(
                rng.choice(("+", "-")),
                self.expr(dtype, readable_ports, variables, depth - 1),
                Lit(IntV(rng.randint(0, 2))),
            )
        if kind == "not":
            return Unop("!", self.expr(BOOL, readable_ports, variables, depth - 1))
        if kind == "cmp":
            operand_type = self.dtype()
            op = rng.choice(("=", "!=")) if not isinstance(self.concrete(operand_type), IntRange) else rng.choice(("=", "!=", "<", "<="))
            return Binop(
                op,
                self.expr(operand_type, readable_ports, variables, 0),
                self.expr(operand_type, readable_ports, variables, 0),
            )
        value = self.value(dtype)
        if isinstance(value, EnumV):
            # Enum literals read as names in expressions, like the parser does.
            return Ref(value.literal)
        return Lit(value)

    def guard(self, readable_ports, variables) -> Expr:
        return self.expr(BOOL, readable_ports, variables, depth=2)

    # -- composites --------------------------------------------------------------

    def chain(self, offset: int) -> list[Component]:
        """Two fresh single-port components wired in series."""
        rng = self.rng
        dtype = self.dtype()
        stages = []
        for k in range(2):
            ports = (
                Port(name="x", direction=Direction.IN, dtype=dtype),
                Port(
                    name="y",
                    direction=Direction.OUT,
                    dtype=dtype,
                    init=self.value(dtype) if rng.random() < 0.7 else ABSENT,
                ),
            )
            body = Automaton(
                states=("S0",),
                initial="S0",
                transitions=(
                    Transition(source="S0", target="S0", patterns={"x": WILDCARD}, emissions={"y": Ref("x")}),
                ),
            )
            stages.append(
                Component(
                    name=f"C{self.index}_{offset + k}",
                    causality=rng.choice((Causality.WEAK, Causality.STRONG)),
                    ports=ports,
                    body=body,
                )
            )
        composite = Component(
            name=f"C{self.index}_{offset + 2}",
            causality=Causality.WEAK,
            ports=(
                Port(name="x", direction=Direction.IN, dtype=dtype),
                Port(name="y", direction=Direction.OUT, dtype=dtype),
            ),
            body=Composite(
                subs=(
                    SubComponent(name="a", component=stages[0].name),
                    SubComponent(name="b", component=stages[1].name),
                ),
                channels=(
                    Channel(name="cin", dtype=dtype, source=ParentPort("x"), sink=SubPort("a", "x")),
                    Channel(name="mid", dtype=dtype, source=SubPort("a", "y"), sink=SubPort("b", "x")),
                    Channel(name="cout", dtype=dtype, source=SubPort("b", "y"), sink=ParentPort("y")),
                ),
            ),
        )
        return stages + [composite]
