import json
import random

import pytest

from focusgen.frontend import parse_dsl, parse_interchange, print_dsl
from focusgen.model import Automaton, Causality, FunctionBehavior, resolve, UnknownReference

from conftest import corpus_source, load_model
from genmodels import gen_model


class TestParseDsl:
    def test_smallest_model(self):
        m, diags = parse_dsl("model M { component C (weak) { in x: Bool  out y: Bool  function { y = x } } }")
        assert not diags
        assert m is not None
        assert len(m.components) == 1
        assert isinstance(m.components[0].body, FunctionBehavior)
        assert m.root == "C"  # a single component is the implicit root

    def test_unbalanced_brace(self):
        source = "model M {\n  component C (weak) {\n    in x: Bool\n"
        m, diags = parse_dsl(source, "broken.afm")
        assert m is None
        assert diags and diags[0].is_error
        span = diags[0].span
        assert span.file == "broken.afm"
        assert 1 <= span.line <= source.count("\n") + 1

    def test_echo_shape(self):
        m, diags = parse_dsl(corpus_source("echo.afm"), "echo.afm")
        assert not diags
        body = m.components[0].body
        assert isinstance(body, Automaton)
        assert body.states == ("Idle", "Busy")
        assert len(body.transitions) == 2

    def test_causality_defaults_to_strong(self):
        m, _ = parse_dsl("model M { component C { out y: Bool function { y = true } } }")
        assert m.components[0].causality is Causality.STRONG

    def test_multiple_components_need_explicit_root(self):
        source = (
            "model M { component A (weak) { out y: Bool function { y = true } } "
            "component B (weak) { out y: Bool function { y = true } } }"
        )
        m, diags = parse_dsl(source)
        assert m is None
        assert any("root" in d.message for d in diags)

    def test_comments_and_whitespace_insensitivity(self):
        source = "model M{component C(weak){in x:Bool // inline\nout y:Bool function{y=x}}root C}"
        m, diags = parse_dsl(source)
        assert not diags
        assert m.components[0].name == "C"

    def test_parse_never_raises(self):
        for source in ("", "model", "model M {", "model M { component }", "model M }{", "model M { component C } }"):
            m, diags = parse_dsl(source)
            assert m is None
            assert diags and all(d.span.line >= 1 for d in diags)

    def test_unknown_root_surfaces_at_resolve(self):
        m, diags = parse_dsl("model M { root X }")
        assert not diags
        with pytest.raises(UnknownReference):
            resolve(m)


class TestInterchange:
    def test_echo_equals_dsl_parse(self):
        dsl_model, _ = parse_dsl(corpus_source("echo.afm"), "echo.afm")
        json_model, diags = parse_interchange(corpus_source("echo.json"), "echo.json")
        assert not diags
        assert json_model == dsl_model

    def test_chain_equals_dsl_parse(self):
        dsl_model, _ = parse_dsl(corpus_source("chain.afm"), "chain.afm")
        json_model, diags = parse_interchange(corpus_source("chain.json"), "chain.json")
        assert not diags
        assert json_model == dsl_model

    def test_missing_root_field(self):
        doc = json.loads(corpus_source("echo.json"))
        del doc["root"]
        m, diags = parse_interchange(json.dumps(doc))
        assert m is None
        assert any("root" in d.message for d in diags)

    def test_empty_components_with_root_fails_at_resolve(self):
        m, diags = parse_interchange('{"name": "M", "types": [], "components": [], "root": "C"}')
        assert not diags
        with pytest.raises(UnknownReference):
            resolve(m)

    def test_bad_json_reports_position(self):
        m, diags = parse_interchange('{"name": ', "broken.json")
        assert m is None
        assert diags[0].code == "bad-json"
        assert diags[0].span.line >= 1

    def test_duplicate_key_rejected(self):
        m, diags = parse_interchange('{"name": "M", "name": "N", "components": [], "root": "C"}')
        assert m is None
        assert diags[0].code == "duplicate-key"

    def test_bad_causality_value(self):
        doc = json.loads(corpus_source("echo.json"))
        doc["components"][0]["causality"] = "sideways"
        m, diags = parse_interchange(json.dumps(doc))
        assert m is None
        assert diags[0].code == "schema"


class TestPrintDsl:
    def test_begins_with_model_keyword(self):
        m, _ = parse_dsl("model M { component C (weak) { out y: Bool function { y = true } } }")
        assert print_dsl(m).startswith("model M {")

    def test_enum_literals_keep_declaration_order(self):
        m, _ = parse_dsl(
            "model M { type T { zig, zag, zog } component C (weak) { out y: T function { y = zag } } root C }"
        )
        assert "type T { zig, zag, zog }" in print_dsl(m)

    def test_echo_round_trip(self):
        m, _ = parse_dsl(corpus_source("echo.afm"), "echo.afm")
        m2, diags = parse_dsl(print_dsl(m))
        assert not diags
        assert m2 == m

    def test_resolved_model_prints_identically(self):
        rm = load_model("echo.afm")
        assert print_dsl(rm) == print_dsl(rm.model)

    def test_round_trip_property(self):
        rng = random.Random(411)
        for i in range(200):
            m = gen_model(rng, i)
            text = print_dsl(m)
            m2, diags = parse_dsl(text, f"gen{i}.afm")
            assert not diags, (text, [d.render() for d in diags])
            assert m2 == m

    def test_every_corpus_file_round_trips(self):
        from conftest import all_corpus_models

        for name in all_corpus_models():
            m, diags = parse_dsl(corpus_source(name), name)
            assert not diags
            m2, diags2 = parse_dsl(print_dsl(m), name)
            assert not diags2
            assert m2 == m
