"""Exhaustive enumeration of finite input histories.

Every input port contributes its carrier plus the empty slot, so a
component with ports p1..pk and horizon T has prod(|carrier_i|+1)^T
histories. Enumeration is canonical: earlier slots vary slowest, within
a slot ports vary in declaration order, and each port's options start
with the empty slot followed by the carrier in canonical order.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from ..model import ABSENT, Component, Value
from ..model.resolve import ResolvedModel

DEFAULT_BUDGET = 10**6


class BudgetExceeded(Exception):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"{needed} input sequences exceed the budget of {budget}")
        self.needed = needed
        self.budget = budget


def slot_options(rm: ResolvedModel, comp: Component) -> list[tuple[str, tuple[Value, ...]]]:
    return [(p.name, (ABSENT,) + rm.carrier_of(p.dtype)) for p in comp.in_ports]


def sequence_count(rm: ResolvedModel, comp: Component, horizon: int) -> int:
    per_slot = 1
    for _, options in slot_options(rm, comp):
        per_slot *= len(options)
    return per_slot**horizon


def enumerate_inputs(
    rm: ResolvedModel,
    comp: Component,
    horizon: int,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[tuple[dict[str, Value], ...]]:
    """Yield every input history of the given horizon, in canonical order."""
    needed = sequence_count(rm, comp, horizon)
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    names = [name for name, _ in slot_options(rm, comp)]
    options = [opts for _, opts in slot_options(rm, comp)]
    per_position = options * horizon
    for combo in itertools.product(*per_position):
        yield tuple(
            dict(zip(names, combo[t * len(names) : (t + 1) * len(names)]))
            for t in range(horizon)
        )
