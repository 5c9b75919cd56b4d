import os
import random

import pytest
from hypothesis import given, strategies as st

from focusgen.ir import build_timed_table, lower_atomic, lower_composite, lower_frame
from focusgen.model import Automaton, Composite
from focusgen.render import (
    CATALOG,
    MissingTemplate,
    PlaceholderUnfilled,
    TEMPLATE_IDS,
    check_spec_source,
    emit_component_document,
    emit_latex,
    emit_plaintext,
    expand_template,
    load_template,
    operators_markdown,
    read_checksum,
    skeleton,
)
from focusgen.render.template import Template

from conftest import GOLDEN_DIR, all_corpus_models, load_model
from genmodels import gen_model
from latexscan import scan_latex


def _golden(name: str) -> str:
    with open(os.path.join(GOLDEN_DIR, name), encoding="utf-8") as fh:
        return fh.read()


def _document_for(rm, comp, kind, ascii_ops=False):
    if isinstance(comp.body, Composite):
        return emit_component_document(lower_composite(rm, comp), None, kind, ascii_ops)
    table = build_timed_table(rm, comp) if isinstance(comp.body, Automaton) else None
    return emit_component_document(lower_frame(rm, comp), table, kind, ascii_ops)


def _all_corpus_documents(kind, ascii_ops=False):
    for name in all_corpus_models():
        rm = load_model(name)
        for comp in rm.model.components:
            yield name, comp.name, _document_for(rm, comp, kind, ascii_ops)


class TestGolden:
    @pytest.mark.parametrize(
        "model,component,kind,golden,ascii_ops",
        [
            ("echo.afm", "Echo", "text", "echo.spec.txt", False),
            ("echo.afm", "Echo", "latex", "echo.spec.tex", False),
            ("chain.afm", "Chain", "text", "chain.spec.txt", False),
            ("vending.afm", "Vending", "text", "vending.spec.txt", False),
            ("gate.afm", "Gate", "text", "gate_ascii.spec.txt", True),
        ],
    )
    def test_document_matches_golden(self, model, component, kind, golden, ascii_ops):
        rm = load_model(model)
        doc = _document_for(rm, rm.component(component), kind, ascii_ops)
        assert doc.body == _golden(golden)

    def test_composite_wiring_text(self):
        chain = load_model("chain.afm")
        body = _document_for(chain, chain.component("Chain"), "text").body
        assert "loc mid : Bool" in body
        assert "Pass(x; mid) ∧ Pass(mid; y)" in body


class TestDeterminism:
    def test_double_emission_is_byte_identical(self, echo):
        comp = echo.component("Echo")
        first = _document_for(echo, comp, "latex")
        second = _document_for(echo, comp, "latex")
        assert first.body == second.body
        assert first.checksum == second.checksum

    def test_checksum_trailer_matches_field(self, echo):
        doc = _document_for(echo, echo.component("Echo"), "text")
        assert read_checksum(doc.body) == doc.checksum


class TestWellFormedness:
    def test_every_latex_document_balances(self):
        for model, comp, doc in _all_corpus_documents("latex"):
            problems = scan_latex(doc.body)
            assert not problems, (model, comp, problems)

    def test_preamble_balances(self):
        from importlib import resources

        text = resources.files("focusgen.render").joinpath("data", "assets", "focus-preamble.tex").read_text()
        assert not scan_latex(text)

    @pytest.mark.parametrize("ascii_ops", [False, True])
    def test_every_plaintext_document_checks_clean(self, ascii_ops):
        for model, comp, doc in _all_corpus_documents("text", ascii_ops):
            diagnostics = check_spec_source(doc.body)
            errors = [d for d in diagnostics if d.is_error]
            assert not errors, (model, comp, [d.render() for d in errors])

    def test_ascii_mode_operator_forms(self):
        gate = load_model("gate.afm")
        body = _document_for(gate, gate.component("Gate"), "text", ascii_ops=True).body
        assert "/\\" in body
        assert "∧" not in body


class TestChecker:
    def test_non_contiguous_enumeration(self):
        text = "spec S\n  in  x : Bool\n  gar\n    (1) x(t) = true\n    (3) x(t) = false\nend\n"
        diagnostics = check_spec_source(text)
        assert any(d.code == "non-contiguous-enumeration" for d in diagnostics)

    def test_unknown_operator_glyph(self):
        text = "spec S\n  in  x : Bool\n  gar\n    (1) x(t) ⊕ true\nend\n"
        diagnostics = check_spec_source(text)
        assert any(d.code == "unknown-operator" and d.is_error for d in diagnostics)

    def test_undeclared_stream(self):
        text = "spec S\n  in  x : Bool\n  gar\n    (1) ghost(t) = true\nend\n"
        diagnostics = check_spec_source(text)
        assert any(d.code == "undeclared-stream" for d in diagnostics)

    def test_unclosed_frame(self):
        diagnostics = check_spec_source("spec S\n  in  x : Bool\n")
        assert any(d.code == "unbalanced-frame" for d in diagnostics)

    def test_stray_end(self):
        diagnostics = check_spec_source("end\n")
        assert any(d.code == "unbalanced-frame" for d in diagnostics)

    def test_ragged_table(self):
        text = "table T\n  st | x | st'\n  A | on\nend\n"
        diagnostics = check_spec_source(text)
        assert any(d.code == "ragged-table" for d in diagnostics)

    def test_spans_point_into_the_text(self):
        text = "spec S\n  in  x : Bool\n  gar\n    (1) x(t) ⊕ true\nend\n"
        for d in check_spec_source(text):
            assert 1 <= d.span.line <= text.count("\n") + 1


class TestTemplates:
    def test_expansion_leaves_no_placeholders(self):
        tmpl = load_template("datatype-decl", "txt")
        out = expand_template(tmpl, {"name": "Signal", "literals": "on | off"})
        assert "{{" not in out

    def test_missing_required_placeholder(self):
        tmpl = load_template("component-frame", "txt")
        with pytest.raises(PlaceholderUnfilled) as exc:
            expand_template(tmpl, {"interface": "  in  x : Bool", "asm_block": "x", "gar_block": "y"})
        assert exc.value.name == "name"

    def test_unknown_template(self):
        with pytest.raises(MissingTemplate):
            load_template("no-such-frame", "txt")

    def test_required_placeholders_occur_in_bodies(self):
        for template_id in TEMPLATE_IDS:
            for kind in ("txt", "tex"):
                tmpl = load_template(template_id, kind)
                assert set(tmpl.required) <= tmpl.placeholders(), (template_id, kind)

    @pytest.mark.parametrize("template_id", TEMPLATE_IDS)
    def test_skeletons_pass_the_checker(self, template_id):
        diagnostics = check_spec_source(skeleton(template_id))
        assert not [d for d in diagnostics if d.is_error]

    def test_optional_placeholder_line_disappears(self):
        tmpl = Template(id="component-frame", body="a\n{{gone}}\nb", required=())
        assert expand_template(tmpl, {}) == "a\nb"

    @given(st.dictionaries(st.sampled_from(["header", "table_block"]), st.text(alphabet="xy\n", max_size=6)))
    def test_expansion_never_leaves_placeholder_braces(self, optional):
        tmpl = load_template("timed-table", "txt")
        subst = {"name": "T", "rows": "  st | st'\n  A  | A", **optional}
        assert "{{" not in expand_template(tmpl, subst)

    def test_directory_override(self, tmp_path, monkeypatch):
        override = tmp_path / "templates"
        override.mkdir()
        (override / "datatype-decl.txt.tmpl").write_text("custom {{name}} = {{literals}}\n")
        monkeypatch.setenv("FOCUSGEN_TEMPLATES", str(override))
        tmpl = load_template("datatype-decl", "txt")
        assert expand_template(tmpl, {"name": "T", "literals": "a"}).startswith("custom T")
        # Other templates still come from the package data.
        assert "spec {{name}}" in load_template("component-frame", "txt").body


class TestCatalog:
    def test_symbols_are_unique(self):
        symbols = [e.symbol for e in CATALOG]
        assert len(symbols) == len(set(symbols))

    def test_every_formula_node_renders_in_every_mode(self):
        rng = random.Random(2024)
        rendered = 0
        for i in range(60):
            m = gen_model(rng, i)
            from focusgen.model import resolve

            rm = resolve(m)
            for comp in m.components:
                if comp.is_composite:
                    continue
                frame = lower_frame(rm, comp)
                for kind, ascii_ops in (("latex", False), ("text", False), ("text", True)):
                    doc = emit_component_document(
                        frame,
                        build_timed_table(rm, comp) if isinstance(comp.body, Automaton) else None,
                        kind,
                        ascii_ops,
                    )
                    assert doc.body
                    rendered += 1
        assert rendered > 100

    def test_operators_markdown_lists_every_entry(self):
        text = operators_markdown()
        for e in CATALOG:
            assert f"| {e.symbol} |" in text


class TestStandaloneEmitters:
    def test_emit_latex_accepts_all_ir_kinds(self, echo, chain):
        frame = lower_atomic(echo, echo.component("Echo"))
        table = build_timed_table(echo, echo.component("Echo"))
        composite = lower_composite(chain, chain.component("Chain"))
        for value in (frame, table, composite):
            assert not scan_latex(emit_latex(value).body)
            text_doc = emit_plaintext(value)
            assert not [d for d in check_spec_source(text_doc.body) if d.is_error]
