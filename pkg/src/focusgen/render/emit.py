"""Deterministic emission of LaTeX and plain-text specification documents.

Identical IR values yield byte-identical documents; every document ends
in a trailer comment with the sha256 of everything above it. Plain-text
documents come in a unicode and an ASCII operator flavor; both satisfy
the source checker. Math symbols always go through the operator catalog.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..model import (
    ABSENT,
    Absent,
    AbsentPattern,
    BoolType,
    BoolV,
    EnumType,
    EnumV,
    IntRange,
    IntV,
    LitPattern,
    Value,
)
from ..ir.core import (
    CompositeSpec,
    FAtom,
    FAnd,
    FImplies,
    FNot,
    FOr,
    Formula,
    FTrue,
    SpecFrame,
    TAccess,
    TClamp,
    TLit,
    TOp,
    Term,
    TimedTable,
)
from .catalog import OP_KIND, entry
from .template import Template, expand_template, load_template

LATEX = "latex"
TEXT = "text"

_KIND_EXT = {LATEX: "tex", TEXT: "txt"}

# Unified precedence for printing; parentheses appear when a child binds
# looser than its context. Negation wraps comparison atoms so that
# "not (x < 1)" never reads as a negated operand.
_L_IMPLIES, _L_OR, _L_AND, _L_CMP, _L_NOT, _L_ADD = 1, 2, 3, 4, 5, 6


@dataclass(frozen=True)
class Document:
    kind: str  # LATEX or TEXT
    body: str
    checksum: str


class _Renderer:
    def __init__(self, kind: str, ascii_ops: bool = False):
        self.kind = kind
        self.ascii_ops = ascii_ops and kind == TEXT

    def op(self, op_kind: str) -> str:
        e = entry(op_kind)
        if self.kind == LATEX:
            return e.latex
        return e.ascii if self.ascii_ops else e.text

    def name(self, name: str) -> str:
        if self.kind == LATEX:
            return r"\fname{" + name.replace("_", r"\_") + "}"
        return name

    def typename(self, dtype) -> str:
        if isinstance(dtype, BoolType):
            return r"\ftypename{Bool}" if self.kind == LATEX else "Bool"
        if isinstance(dtype, IntRange):
            if self.kind == LATEX:
                return r"\ftypename{Int}[" + f"{dtype.lo}..{dtype.hi}]"
            return f"Int[{dtype.lo}..{dtype.hi}]"
        assert isinstance(dtype, EnumType)
        if self.kind == LATEX:
            return r"\ftypename{" + dtype.name.replace("_", r"\_") + "}"
        return dtype.name

    def value(self, value: Value) -> str:
        if isinstance(value, Absent):
            return self.op("eps")
        if isinstance(value, BoolV):
            return self.op("true" if value.value else "false")
        if isinstance(value, IntV):
            return str(value.value)
        assert isinstance(value, EnumV)
        return self.name(value.literal)

    def access(self, a: TAccess, init_ctx: bool) -> str:
        if a.shift == 1:
            suffix = self.op("next")
        elif init_ctx:
            suffix = self.op("at0")
        else:
            suffix = self.op("at")
        return self.name(a.name) + suffix

    # -- terms and formulas ------------------------------------------------

    def term(self, t: Term, level: int = 0, init_ctx: bool = False) -> str:
        if isinstance(t, TLit):
            return self.value(t.value)
        if isinstance(t, TAccess):
            return self.access(t, init_ctx)
        if isinstance(t, TClamp):
            # Saturation is a documented convention, not visible syntax.
            return self.term(t.arg, level, init_ctx)
        assert isinstance(t, TOp)
        if t.op == "!":
            inner = self.term(t.args[0], _L_NOT, init_ctx)
            text = f"{self.op('not')}{inner}"
            return self._wrap(text, _L_NOT, level)
        own = _L_AND if t.op == "&&" else _L_OR if t.op == "||" else _L_CMP if t.op in ("=", "!=", "<", "<=") else _L_ADD
        left_level = own + 1 if own == _L_CMP else own
        left = self.term(t.args[0], left_level, init_ctx)
        right = self.term(t.args[1], own + 1, init_ctx)
        text = f"{left} {self.op(OP_KIND[t.op])} {right}"
        return self._wrap(text, own, level)

    def formula(self, f: Formula, level: int = 0, init_ctx: bool = False) -> str:
        if isinstance(f, FTrue):
            return self.op("true")
        if isinstance(f, FAtom):
            left = self.term(f.left, _L_CMP + 1, init_ctx)
            right = self.term(f.right, _L_CMP + 1, init_ctx)
            text = f"{left} {self.op(OP_KIND[f.op])} {right}"
            return self._wrap(text, _L_CMP, level)
        if isinstance(f, FNot):
            inner = self.formula(f.arg, _L_NOT, init_ctx)
            return self._wrap(f"{self.op('not')}{inner}", _L_NOT, level)
        if isinstance(f, FAnd):
            text = f" {self.op('and')} ".join(self.formula(p, _L_AND, init_ctx) for p in f.args)
            return self._wrap(text, _L_AND, level)
        if isinstance(f, FOr):
            text = f" {self.op('or')} ".join(self.formula(p, _L_OR, init_ctx) for p in f.args)
            return self._wrap(text, _L_OR, level)
        assert isinstance(f, FImplies)
        left = self.formula(f.antecedent, _L_IMPLIES + 1, init_ctx)
        right = self.formula(f.consequent, _L_IMPLIES + 1, init_ctx)
        return self._wrap(f"{left} {self.op('implies')} {right}", _L_IMPLIES, level)

    @staticmethod
    def _wrap(text: str, own: int, parent: int) -> str:
        return f"({text})" if own < parent else text


# ---------------------------------------------------------------------------
# Section builders


def _comment(kind: str, lines: list[str]) -> str:
    marker = "%" if kind == LATEX else "//"
    return "\n".join(f"{marker} {line}".rstrip() for line in lines)


_CONVENTIONS = [
    "Do not edit by hand; regenerate from the model.",
    "Conventions: bounded-integer arithmetic saturates at the target type",
    "bounds. When no transition is enabled a component stutters: state and",
    "variables persist while every output slot stays empty (the final",
    "guarantee formula). Nondeterministic models keep every transition",
    "formula; the simulator fires the first enabled one in declaration",
    "order. Formulas hold for every time index t.",
]


def _header(kind: str, what: str, name: str) -> str:
    return _comment(kind, [f"Generated {what}: {name}"] + _CONVENTIONS) + "\n"


def _datatypes_block(kind: str, used: list[EnumType], r: _Renderer) -> str:
    if not used:
        return ""
    tmpl = load_template("datatype-decl", _KIND_EXT[kind])
    lines = []
    for et in used:
        if kind == LATEX:
            literals = r" \fmid ".join(r.name(lit) for lit in et.literals)
            name = et.name.replace("_", r"\_")
        else:
            literals = " | ".join(et.literals)
            name = et.name
        lines.append(expand_template(tmpl, {"name": name, "literals": literals}).rstrip("\n"))
    return "\n".join(lines) + "\n"


def _used_enums(*dtype_lists) -> list[EnumType]:
    seen: dict[str, EnumType] = {}
    for dtypes in dtype_lists:
        for _, dtype in dtypes:
            if isinstance(dtype, EnumType) and dtype.name not in seen:
                seen[dtype.name] = dtype
    return list(seen.values())


def _interface_block(kind: str, frame_ins, frame_outs, r: _Renderer) -> str:
    lines = []
    for name, dtype in frame_ins:
        if kind == LATEX:
            lines.append(r"\fin{" + name.replace("_", r"\_") + "}{" + r.typename(dtype) + "}")
        else:
            lines.append(f"  in  {name} : {r.typename(dtype)}")
    for name, dtype in frame_outs:
        if kind == LATEX:
            lines.append(r"\fout{" + name.replace("_", r"\_") + "}{" + r.typename(dtype) + "}")
        else:
            lines.append(f"  out {name} : {r.typename(dtype)}")
    return "\n".join(lines)


def _state_decl(kind: str, frame: SpecFrame, r: _Renderer) -> str:
    if frame.state_type is None:
        return ""
    literals = frame.state_type.literals
    if kind == LATEX:
        inner = r" \fmid ".join(r.name(s) for s in literals)
        return r"\fstate{\{\," + inner + r"\,\}}"
    return "  st : { " + " | ".join(literals) + " }"


def _var_decls(kind: str, frame: SpecFrame, r: _Renderer) -> str:
    lines = []
    for name, dtype in frame.variables:
        if kind == LATEX:
            lines.append(r"\fvar{" + name.replace("_", r"\_") + "}{" + r.typename(dtype) + "}")
        else:
            lines.append(f"  var {name} : {r.typename(dtype)}")
    return "\n".join(lines)


def _init_block(kind: str, frame: SpecFrame, r: _Renderer) -> str:
    if not frame.init:
        return ""
    lines = []
    if kind == LATEX:
        lines.append(r"\fsection{init}")
        for eq in frame.init:
            lines.append(r"\finit{" + r.formula(eq, init_ctx=True) + "}")
    else:
        lines.append("  init")
        for eq in frame.init:
            lines.append("    " + r.formula(eq, init_ctx=True))
    return "\n".join(lines)


def _indexed_block(kind: str, formulas, r: _Renderer) -> str:
    lines = []
    for i, f in formulas:
        if kind == LATEX:
            lines.append(r"\fformula{" + str(i) + "}{" + r.formula(f) + "}")
        else:
            lines.append(f"    ({i}) " + r.formula(f))
    return "\n".join(lines)


def _locals_block(kind: str, spec: CompositeSpec, r: _Renderer) -> str:
    lines = []
    for name, dtype in spec.locals:
        if kind == LATEX:
            lines.append(r"\floc{" + name.replace("_", r"\_") + "}{" + r.typename(dtype) + "}")
        else:
            lines.append(f"  loc {name} : {r.typename(dtype)}")
    return "\n".join(lines)


def _wiring_block(kind: str, spec: CompositeSpec, r: _Renderer) -> str:
    apps = []
    for app in spec.wiring:
        ins = ", ".join(r.name(s.name) for s in app.inputs)
        outs = ", ".join(r.name(s.name) for s in app.outputs)
        apps.append(f"{r.name(app.component)}({ins}; {outs})")
    text = f" {r.op('and')} ".join(apps)
    if kind == LATEX:
        return r"\fformula{1}{" + text + "}"
    return f"    (1) {text}"


# ---------------------------------------------------------------------------
# Timed tables


def _table_cells(table: TimedTable, r: _Renderer) -> tuple[list[str], list[list[str]]]:
    prime = "'"
    header = ["st"]
    header += list(table.in_ports)
    header.append("guard")
    header += [p + (prime if table.out_shift else "") for p in table.out_ports]
    header += [v + prime for v in table.variables]
    header.append("st" + prime)
    rows = []
    none_update = "—" if r.kind == TEXT and not r.ascii_ops else "-"
    for row in table.rows:
        cells = [r.name(row.state)]
        cells += [_pattern_cell_text(p, r) for p in row.patterns]
        cells.append(r.op("true") if row.guard is None else r.formula(row.guard))
        cells += [r.op("eps") if t is None else r.term(t) for t in row.outputs]
        cells += [none_update if t is None else r.term(t) for t in row.updates]
        cells.append(r.name(row.next))
        rows.append(cells)
    return header, rows


def _pattern_cell_text(pat, r: _Renderer) -> str:
    if isinstance(pat, LitPattern):
        return r.value(pat.value)
    if isinstance(pat, AbsentPattern):
        return r.op("eps")
    return "*"


def _table_rows_text(table: TimedTable, r: _Renderer) -> str:
    header, rows = _table_cells(table, r)
    widths = [len(h) for h in header]
    for cells in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, cells)]
    def fmt(cells: list[str]) -> str:
        return ("  " + " | ".join(c.ljust(w) for c, w in zip(cells, widths))).rstrip()
    lines = [fmt(header)]
    lines.append("  " + "-+-".join("-" * w for w in widths))
    lines.extend(fmt(cells) for cells in rows)
    return "\n".join(lines)


def _table_rows_latex(table: TimedTable, r: _Renderer) -> tuple[str, str]:
    header, rows = _table_cells(table, r)
    colspec = "|".join("l" for _ in header)
    head_cells = []
    for h in header:
        if h == "guard":
            head_cells.append("guard")
        else:
            head_cells.append("$" + r.name(h) + "$")
    lines = [" & ".join(head_cells) + r" \\ \hline"]
    for cells in rows:
        latex_cells = []
        for c in cells:
            latex_cells.append("$" + c + "$" if c else "")
        lines.append(" & ".join(latex_cells) + r" \\")
    return colspec, "\n".join(lines)


def _table_section(kind: str, table: TimedTable, r: _Renderer, header: str) -> str:
    tmpl = load_template("timed-table", _KIND_EXT[kind])
    if kind == LATEX:
        colspec, rows = _table_rows_latex(table, r)
        subst = {"header": header, "name": table.name, "colspec": colspec, "rows": rows}
    else:
        subst = {"header": header, "name": table.name, "rows": _table_rows_text(table, r)}
    return expand_template(tmpl, subst)


# ---------------------------------------------------------------------------
# Documents


def _finish(kind: str, expanded: str) -> Document:
    text = expanded.rstrip("\n") + "\n"
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    marker = "%" if kind == LATEX else "//"
    return Document(kind=kind, body=f"{text}\n{marker} sha256: {digest}\n", checksum=digest)


def read_checksum(body: str) -> str | None:
    """The sha256 recorded in a document's trailer comment, if any."""
    for line in reversed(body.splitlines()):
        if not line.strip():
            continue
        for marker in ("% sha256: ", "// sha256: "):
            if line.startswith(marker):
                return line[len(marker) :].strip()
        return None
    return None


def _frame_subst(kind: str, frame: SpecFrame, r: _Renderer, table_block: str) -> dict[str, str]:
    return {
        "header": _header(kind, "specification", frame.name),
        "datatypes": _datatypes_block(kind, _used_enums(frame.inputs, frame.outputs, frame.variables), r),
        "name": frame.name if kind == TEXT else frame.name.replace("_", r"\_"),
        "interface": _interface_block(kind, frame.inputs, frame.outputs, r),
        "state_decl": _state_decl(kind, frame, r),
        "var_decls": _var_decls(kind, frame, r),
        "init_block": _init_block(kind, frame, r),
        "asm_block": _indexed_block(kind, list(enumerate(frame.asm, start=1)), r),
        "gar_block": _indexed_block(kind, [(g.index, g.formula) for g in frame.gar], r),
        "table_block": table_block,
    }


def _composite_subst(kind: str, spec: CompositeSpec, r: _Renderer) -> dict[str, str]:
    return {
        "header": _header(kind, "specification", spec.name),
        "datatypes": _datatypes_block(kind, _used_enums(spec.inputs, spec.outputs, spec.locals), r),
        "name": spec.name if kind == TEXT else spec.name.replace("_", r"\_"),
        "interface": _interface_block(kind, spec.inputs, spec.outputs, r),
        "locals": _locals_block(kind, spec, r),
        "wiring": _wiring_block(kind, spec, r),
    }


def _emit(spec, kind: str, ascii_ops: bool) -> Document:
    r = _Renderer(kind, ascii_ops)
    if isinstance(spec, SpecFrame):
        template_id = "component-frame" if spec.state_type is not None else "function-frame"
        tmpl = load_template(template_id, _KIND_EXT[kind])
        return _finish(kind, expand_template(tmpl, _frame_subst(kind, spec, r, "")))
    if isinstance(spec, TimedTable):
        header = _header(kind, "timed table", spec.name)
        return _finish(kind, _table_section(kind, spec, r, header))
    if isinstance(spec, CompositeSpec):
        tmpl = load_template("composite-frame", _KIND_EXT[kind])
        return _finish(kind, expand_template(tmpl, _composite_subst(kind, spec, r)))
    raise TypeError(f"cannot emit {type(spec).__name__}")


def emit_latex(spec: SpecFrame | TimedTable | CompositeSpec) -> Document:
    return _emit(spec, LATEX, ascii_ops=False)


def emit_plaintext(spec: SpecFrame | TimedTable | CompositeSpec, ascii_ops: bool = False) -> Document:
    return _emit(spec, TEXT, ascii_ops)


def emit_component_document(
    spec: SpecFrame | CompositeSpec,
    table: TimedTable | None,
    kind: str,
    ascii_ops: bool = False,
) -> Document:
    """One per-component document: the frame plus its timed table, if any."""
    r = _Renderer(kind, ascii_ops)
    if isinstance(spec, CompositeSpec):
        tmpl = load_template("composite-frame", _KIND_EXT[kind])
        return _finish(kind, expand_template(tmpl, _composite_subst(kind, spec, r)))
    template_id = "component-frame" if spec.state_type is not None else "function-frame"
    tmpl = load_template(template_id, _KIND_EXT[kind])
    table_block = ""
    if table is not None:
        table_block = "\n" + _table_section(kind, table, r, "").rstrip("\n")
    return _finish(kind, expand_template(tmpl, _frame_subst(kind, spec, r, table_block)))


# ---------------------------------------------------------------------------
# Skeletons for the template command

_SKELETONS: dict[str, dict[str, str]] = {
    "component-frame": {
        "header": "// Component frame skeleton; replace every section.\n",
        "name": "Component",
        "interface": "  in  x : Bool\n  out y : Bool",
        "state_decl": "  st : { S0 }",
        "init_block": "  init\n    st(0) = S0",
        "asm_block": "    (1) true",
        "gar_block": "    (1) st(t) = S0 ∧ x(t) ≠ ε → y(t) = x(t) ∧ st(t+1) = S0",
    },
    "function-frame": {
        "header": "// Function frame skeleton; replace every section.\n",
        "name": "Component",
        "interface": "  in  x : Bool\n  out y : Bool",
        "asm_block": "    (1) true",
        "gar_block": "    (1) y(t) = x(t)",
    },
    "composite-frame": {
        "header": "// Composite frame skeleton; replace every section.\n",
        "name": "Composite",
        "interface": "  in  x : Bool\n  out y : Bool",
        "locals": "  loc l1 : Bool",
        "wiring": "    (1) A(x; l1) ∧ B(l1; y)",
    },
    "timed-table": {
        "header": "// Timed table skeleton; one row per transition.\n",
        "name": "Component",
        "rows": "  st | x  | guard | y  | st'\n  ---+----+-------+----+----\n  S0 | *  | true  | x  | S0",
    },
    "datatype-decl": {
        "name": "Signal",
        "literals": "on | off",
    },
}


def skeleton(template_id: str) -> str:
    """Expand the plain-text template with its example content."""
    tmpl = load_template(template_id, "txt")
    return expand_template(tmpl, _SKELETONS[template_id]) + "\n"
