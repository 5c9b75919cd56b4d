"""End-to-end operations over model sources, free of any file I/O.

Each function takes source text and returns data plus diagnostics; the
service publishes these over HTTP and the command-line client does the
surrounding file handling. Lowering functions are always reached through
the module attribute, so test harnesses can splice mutated lowerings in.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, error, has_errors, whole_file_span
from .frontend import parse_dsl, parse_interchange
from .ir import lower as lowering
from .ir.evaluate import Violated, eval_frame, eval_formula_at, formula_antecedent
from .model import Automaton, Component, Composite
from .model.resolve import ModelError, ResolvedModel, resolve
from .render import LATEX, TEXT, check_spec_source, emit_component_document
from .semantics import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    TraceFormatError,
    enumerate_inputs,
    format_trace,
    parse_inputs,
    run,
    sequence_count,
    validate,
)

DSL = "dsl"
INTERCHANGE = "json"

FORMAT_KINDS = {"latex": (LATEX,), "text": (TEXT,), "both": (LATEX, TEXT)}
_EXT = {LATEX: "tex", TEXT: "txt"}

DEFAULT_HORIZON = 4


@dataclass(frozen=True)
class GeneratedDocument:
    component: str
    kind: str  # LATEX or TEXT
    filename: str
    body: str
    checksum: str


@dataclass
class GenerateOutcome:
    diagnostics: list[Diagnostic] = field(default_factory=list)
    documents: list[GeneratedDocument] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


@dataclass
class SimulateOutcome:
    diagnostics: list[Diagnostic] = field(default_factory=list)
    trace_text: str | None = None

    @property
    def ok(self) -> bool:
        return self.trace_text is not None


@dataclass
class OracleComponentResult:
    component: str
    sequences: int
    status: str  # "satisfied" | "violated"
    formula_index: int | None = None
    slot: int | None = None
    counterexample: str | None = None


@dataclass
class OracleOutcome:
    status: str  # "satisfied" | "violated" | "budget-exceeded" | "error"
    diagnostics: list[Diagnostic] = field(default_factory=list)
    components: list[OracleComponentResult] = field(default_factory=list)
    checked: int = 0


@dataclass(frozen=True)
class DriftEntry:
    component: str  # a component name, or a document stem for orphans
    status: str  # "unchanged" | "changed" | "new" | "orphaned"
    diff: str = ""


@dataclass
class DriftOutcome:
    diagnostics: list[Diagnostic] = field(default_factory=list)
    entries: list[DriftEntry] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return all(e.status == "unchanged" for e in self.entries)


def load_model(source: str, syntax: str, filename: str = "<input>") -> tuple[ResolvedModel | None, list[Diagnostic]]:
    """Parse and resolve a model source; every failure is a diagnostic."""
    if syntax == INTERCHANGE:
        model, diagnostics = parse_interchange(source, filename)
    elif syntax == DSL:
        model, diagnostics = parse_dsl(source, filename)
    else:
        return None, [error(whole_file_span(filename), "syntax", f"unknown model syntax '{syntax}'")]
    if model is None:
        return None, diagnostics
    try:
        rm = resolve(model)
    except ModelError as e:
        code = type(e).__name__
        code = {"UnknownReference": "unknown-reference", "DuplicateName": "duplicate-name"}.get(code, "invalid-model")
        span = e.span if e.span is not None else whole_file_span(filename)
        return None, diagnostics + [error(span, code, str(e))]
    return rm, diagnostics


def syntax_for(filename: str) -> str:
    return INTERCHANGE if filename.endswith(".json") else DSL


def _component_ir(rm: ResolvedModel, comp: Component):
    if isinstance(comp.body, Composite):
        return lowering.lower_composite(rm, comp), None
    if isinstance(comp.body, Automaton):
        return lowering.lower_atomic(rm, comp), lowering.build_timed_table(rm, comp)
    return lowering.lower_function(rm, comp), None


def generate_documents(rm: ResolvedModel, formats: str = "both", ascii_ops: bool = False) -> list[GeneratedDocument]:
    documents = []
    for comp in rm.model.components:
        spec, table = _component_ir(rm, comp)
        for kind in FORMAT_KINDS[formats]:
            doc = emit_component_document(spec, table, kind, ascii_ops)
            documents.append(
                GeneratedDocument(
                    component=comp.name,
                    kind=kind,
                    filename=f"{comp.name}.spec.{_EXT[kind]}",
                    body=doc.body,
                    checksum=doc.checksum,
                )
            )
    return documents


def generate(
    source: str,
    syntax: str,
    filename: str = "<input>",
    formats: str = "both",
    ascii_ops: bool = False,
) -> GenerateOutcome:
    rm, diagnostics = load_model(source, syntax, filename)
    outcome = GenerateOutcome(diagnostics=diagnostics)
    if rm is None:
        return outcome
    report = validate(rm)
    outcome.diagnostics.extend(report.diagnostics)
    if not report.ok:
        return outcome
    outcome.documents = generate_documents(rm, formats, ascii_ops)
    return outcome


def check_model(source: str, syntax: str, filename: str = "<input>") -> list[Diagnostic]:
    rm, diagnostics = load_model(source, syntax, filename)
    if rm is None:
        return diagnostics
    return diagnostics + validate(rm).diagnostics


def check_spec(text: str, filename: str = "<spec>") -> list[Diagnostic]:
    return check_spec_source(text, filename)


def simulate(
    source: str,
    syntax: str,
    inputs_text: str,
    filename: str = "<input>",
    component: str | None = None,
    tie_break: str | None = None,
    horizon: int | None = None,
) -> SimulateOutcome:
    rm, diagnostics = load_model(source, syntax, filename)
    outcome = SimulateOutcome(diagnostics=diagnostics)
    if rm is None:
        return outcome
    report = validate(rm)
    outcome.diagnostics.extend(report.diagnostics)
    if not report.ok:
        return outcome
    target = component or rm.model.root
    if target not in rm.components:
        outcome.diagnostics.append(
            error(whole_file_span(filename), "unknown-reference", f"unknown component '{target}'")
        )
        return outcome
    nondet = sorted(name for name, det in report.determinism.items() if not det)
    if nondet and tie_break != "order":
        outcome.diagnostics.append(
            error(
                whole_file_span(filename),
                "nondeterministic",
                f"simulation needs --tie-break=order for nondeterministic component(s) {', '.join(nondet)}",
            )
        )
        return outcome
    try:
        inputs = parse_inputs(inputs_text, rm, target)
    except TraceFormatError as e:
        outcome.diagnostics.append(error(whole_file_span("<inputs>"), "trace-format", str(e)))
        return outcome
    if horizon is not None and horizon != len(inputs):
        outcome.diagnostics.append(
            error(
                whole_file_span("<inputs>"),
                "trace-format",
                f"horizon {horizon} does not match the {len(inputs)} input slot(s)",
            )
        )
        return outcome
    trace = run(rm, target, inputs)
    outcome.trace_text = format_trace(trace, rm)
    return outcome


def _totality_gap(frame, budget: int) -> str | None:
    """A (state, variables, inputs) combination no guarantee covers, if any.

    The lowered relation must be total: some formula's enabling side has to
    hold in every reachable configuration, otherwise the stutter clause went
    missing. Scans the finite carrier product on a synthetic one-slot trace.
    """
    if frame.state_type is None:
        return None
    from itertools import product

    from .model import ABSENT, carrier
    from .semantics.simulate import Snapshot, Trace

    antecedents = [formula_antecedent(g.formula) for g in frame.gar]
    if any(a is None for a in antecedents):
        return None  # an unconditional guarantee covers everything
    states = frame.state_type.literals
    var_names = [name for name, _ in frame.variables]
    var_opts = [carrier(dtype) for _, dtype in frame.variables]
    in_names = [name for name, _ in frame.inputs]
    in_opts = [(ABSENT,) + carrier(dtype) for _, dtype in frame.inputs]
    combos = len(states)
    for opts in var_opts + in_opts:
        combos *= len(opts)
    if combos > budget:
        return None
    identities = tuple(in_names) + tuple(name for name, _ in frame.outputs)
    for state in states:
        for vvals in product(*var_opts) if var_opts else [()]:
            snap = Snapshot(state=state, vars=dict(zip(var_names, vvals)))
            snapshots = ({frame.name: snap}, {frame.name: snap})
            for ivals in product(*in_opts) if in_opts else [()]:
                slot = dict(zip(in_names, ivals))
                for name, _ in frame.outputs:
                    slot[name] = ABSENT
                trace = Trace(
                    model=frame.name,
                    root=frame.name,
                    horizon=1,
                    identities=identities,
                    slots=(slot,),
                    states=snapshots,
                )
                if not any(eval_formula_at(frame, trace, a, 0) for a in antecedents):
                    cells = [f"st={state}"]
                    cells += [f"{n}={_value_text(v)}" for n, v in zip(var_names, vvals)]
                    cells += [f"{n}={_value_text(v)}" for n, v in zip(in_names, ivals)]
                    return ", ".join(cells)
    return None


def _value_text(value) -> str:
    from .frontend.printer import format_value

    return format_value(value)


def oracle(
    source: str,
    syntax: str,
    filename: str = "<input>",
    horizon: int = DEFAULT_HORIZON,
    budget: int = DEFAULT_BUDGET,
) -> OracleOutcome:
    """The faithfulness check: every simulator trace satisfies the frame.

    Two obligations per atomic component: every exhaustively enumerated
    input history yields a simulator trace satisfying the lowered frame,
    and the guarantee relation is total over the finite configuration
    space (the stutter clause must cover whatever no transition does).
    """
    rm, diagnostics = load_model(source, syntax, filename)
    if rm is None:
        return OracleOutcome(status="error", diagnostics=diagnostics)
    report = validate(rm)
    diagnostics = diagnostics + report.diagnostics
    if not report.ok:
        return OracleOutcome(status="error", diagnostics=diagnostics)
    nondet = sorted(name for name, det in report.determinism.items() if not det)
    if nondet:
        diagnostics.append(
            error(
                whole_file_span(filename),
                "nondeterministic",
                f"the oracle needs deterministic components; offending: {', '.join(nondet)}",
            )
        )
        return OracleOutcome(status="error", diagnostics=diagnostics)

    outcome = OracleOutcome(status="satisfied", diagnostics=diagnostics)
    for comp in rm.model.components:
        if isinstance(comp.body, Composite):
            continue
        try:
            needed = sequence_count(rm, comp, horizon)
            if needed > budget:
                raise BudgetExceeded(needed, budget)
            frame = lowering.lower_frame(rm, comp)
            gap = _totality_gap(frame, budget)
            if gap is not None:
                outcome.components.append(
                    OracleComponentResult(
                        component=comp.name,
                        sequences=0,
                        status="violated",
                        counterexample=f"totality gap: no guarantee formula covers {gap}\n",
                    )
                )
                outcome.status = "violated"
                return outcome
            checked = 0
            for seq in enumerate_inputs(rm, comp, horizon, budget):
                trace = run(rm, comp.name, list(seq), horizon)
                result = eval_frame(frame, trace)
                checked += 1
                if isinstance(result, Violated):
                    outcome.components.append(
                        OracleComponentResult(
                            component=comp.name,
                            sequences=checked,
                            status="violated",
                            formula_index=result.index,
                            slot=result.slot,
                            counterexample=format_trace(trace, rm),
                        )
                    )
                    outcome.status = "violated"
                    outcome.checked += checked
                    return outcome
            outcome.components.append(
                OracleComponentResult(component=comp.name, sequences=checked, status="satisfied")
            )
            outcome.checked += checked
        except BudgetExceeded as e:
            outcome.status = "budget-exceeded"
            outcome.diagnostics.append(
                error(
                    whole_file_span(filename),
                    "budget-exceeded",
                    f"{comp.name}: {e.needed} sequences exceed the budget of {e.budget}",
                )
            )
            return outcome
    return outcome


def drift(
    source: str,
    syntax: str,
    existing: dict[str, str],
    filename: str = "<input>",
    formats: str = "both",
    ascii_ops: bool = False,
) -> DriftOutcome:
    """Compare regenerated documents against their stored counterparts."""
    fresh = generate(source, syntax, filename, formats, ascii_ops)
    outcome = DriftOutcome(diagnostics=fresh.diagnostics)
    if not fresh.ok:
        return outcome
    by_file = {doc.filename: doc for doc in fresh.documents}
    components: dict[str, list[GeneratedDocument]] = {}
    for doc in fresh.documents:
        components.setdefault(doc.component, []).append(doc)

    for component in components:
        changed_hunks: list[str] = []
        missing = False
        for doc in components[component]:
            stored = existing.get(doc.filename)
            if stored is None:
                missing = True
            elif stored != doc.body:
                diff_lines = difflib.unified_diff(
                    stored.splitlines(keepends=True),
                    doc.body.splitlines(keepends=True),
                    fromfile=f"{doc.filename} (stored)",
                    tofile=f"{doc.filename} (regenerated)",
                )
                changed_hunks.append("".join(diff_lines))
        if changed_hunks:
            outcome.entries.append(DriftEntry(component, "changed", "".join(changed_hunks)))
        elif missing:
            outcome.entries.append(DriftEntry(component, "new"))
        else:
            outcome.entries.append(DriftEntry(component, "unchanged"))

    orphaned: set[str] = set()
    for stored_name in sorted(existing):
        if stored_name in by_file or ".spec." not in stored_name:
            continue
        stem = stored_name.split(".spec.")[0]
        if stem not in components and stem not in orphaned:
            orphaned.add(stem)
            outcome.entries.append(DriftEntry(stem, "orphaned"))
    return outcome
