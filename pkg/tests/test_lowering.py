import pytest

from focusgen.ir import (
    FAtom,
    FImplies,
    FAnd,
    GarFormula,
    STATE_STREAM,
    SpecFrame,
    StreamRef,
    TAccess,
    TLit,
    UnsupportedBody,
    build_timed_table,
    conj,
    lower_atomic,
    lower_composite,
    lower_function,
    table_to_formulas,
)
from focusgen.model import ABSENT, Automaton, BoolV, EnumV, WILDCARD, LitPattern

from conftest import load_model


def _state(component: str, name: str) -> TLit:
    return TLit(EnumV(f"{component}State", name))


class TestLowerAtomic:
    def test_pass_through_transition_formula(self, passthru):
        frame = lower_atomic(passthru, passthru.component("Pass"))
        expected = FImplies(
            conj([
                FAtom("=", TAccess(STATE_STREAM, 0), _state("Pass", "S0")),
                FAtom("!=", TAccess("x", 0), TLit(ABSENT)),
            ]),
            conj([
                FAtom("=", TAccess("y", 0), TAccess("x", 0)),
                FAtom("=", TAccess(STATE_STREAM, 1), _state("Pass", "S0")),
            ]),
        )
        assert frame.gar[0] == GarFormula(index=1, formula=expected)

    def test_formula_count_is_transitions_plus_stutter(self, echo):
        frame = lower_atomic(echo, echo.component("Echo"))
        assert [g.index for g in frame.gar] == [1, 2, 3]

    def test_gar_indices_are_contiguous_everywhere(self):
        from conftest import all_corpus_models
        from focusgen.model import Automaton as Auto

        for name in all_corpus_models():
            rm = load_model(name)
            for comp in rm.model.components:
                if isinstance(comp.body, Auto):
                    frame = lower_atomic(rm, comp)
                    assert [g.index for g in frame.gar] == list(range(1, len(frame.gar) + 1))

    def test_weak_init_covers_state_and_variables_only(self):
        rm = load_model("satur.afm")
        frame = lower_atomic(rm, rm.component("Satur"))
        targets = [eq.left.name for eq in frame.init]
        assert targets == [STATE_STREAM, "n"]

    def test_strong_init_pins_outputs(self):
        rm = load_model("passthru_strong.afm")
        frame = lower_atomic(rm, rm.component("PassD"))
        assert FAtom("=", TAccess("y", 0), TLit(BoolV(False))) in frame.init

    def test_strong_emissions_move_to_next_slot(self):
        rm = load_model("passthru_strong.afm")
        frame = lower_atomic(rm, rm.component("PassD"))
        consequent = frame.gar[0].formula.consequent
        assert FAtom("=", TAccess("y", 1), TAccess("x", 0)) in consequent.args

    def test_unmentioned_output_is_pinned_empty(self):
        rm = load_model("absentwatch.afm")
        frame = lower_atomic(rm, rm.component("Watch"))
        # Transition 2 (Armed, s=*) emits nothing: alarm(t) = eps.
        consequent = frame.gar[1].formula.consequent
        assert FAtom("=", TAccess("alarm", 0), TLit(ABSENT)) in consequent.args

    def test_asm_is_the_single_true_formula(self, echo):
        frame = lower_atomic(echo, echo.component("Echo"))
        from focusgen.ir import TRUE

        assert frame.asm == (TRUE,)

    def test_state_type_literals_keep_declaration_order(self, echo):
        frame = lower_atomic(echo, echo.component("Echo"))
        assert frame.state_type.literals == ("Idle", "Busy")

    def test_rejects_composites(self, chain):
        with pytest.raises(UnsupportedBody):
            lower_atomic(chain, chain.component("Chain"))


class TestLowerFunction:
    def test_weak_identity(self):
        rm = load_model("gate.afm")
        frame = lower_function(rm, rm.component("Gate"))
        assert frame.state_type is None
        assert frame.init == ()
        assert len(frame.gar) == 1
        atom = frame.gar[0].formula
        assert atom.left == TAccess("c", 0)

    def test_strong_delay(self):
        rm = load_model("delayfn.afm")
        frame = lower_function(rm, rm.component("Delay"))
        assert frame.init == (FAtom("=", TAccess("b", 0), TLit(BoolV(False))),)
        assert frame.gar[0].formula == FAtom("=", TAccess("b", 1), TAccess("a", 0))

    def test_one_formula_per_output(self):
        rm = load_model("fanout.afm")
        frame = lower_function(rm, rm.component("Inv"))
        assert len(frame.gar) == len(rm.component("Inv").out_ports)

    def test_rejects_automata(self, echo):
        with pytest.raises(UnsupportedBody):
            lower_function(echo, echo.component("Echo"))


class TestTimedTable:
    def test_echo_has_one_row_per_transition(self, echo):
        table = build_timed_table(echo, echo.component("Echo"))
        assert len(table.rows) == 2

    def test_pass_through_row_cells(self, passthru):
        table = build_timed_table(passthru, passthru.component("Pass"))
        row = table.rows[0]
        assert row.state == "S0"
        assert row.patterns == (WILDCARD,)
        assert row.guard is None
        assert row.outputs == (TAccess("x", 0),)
        assert row.next == "S0"

    def test_one_update_cell_per_variable(self):
        rm = load_model("counter.afm")
        table = build_timed_table(rm, rm.component("Counter"))
        assert table.variables == ("n",)
        assert all(len(row.updates) == 1 for row in table.rows)

    def test_unmentioned_pattern_renders_as_wildcard(self):
        rm = load_model("vending.afm")
        table = build_timed_table(rm, rm.component("Vending"))
        assert table.rows[0].patterns[0] is WILDCARD  # coin = *
        assert isinstance(table.rows[0].patterns[1], LitPattern)

    def test_table_and_formulas_are_interderivable(self):
        from conftest import all_corpus_models

        for name in all_corpus_models():
            rm = load_model(name)
            for comp in rm.model.components:
                if isinstance(comp.body, Automaton):
                    frame = lower_atomic(rm, comp)
                    table = build_timed_table(rm, comp)
                    recompiled = table_to_formulas(comp, table)
                    assert recompiled == [g.formula for g in frame.gar[:-1]], comp.name

    def test_rejects_functions(self):
        rm = load_model("gate.afm")
        with pytest.raises(UnsupportedBody):
            build_timed_table(rm, rm.component("Gate"))


class TestLowerComposite:
    def test_chain_locals_and_wiring(self, chain):
        spec = lower_composite(chain, chain.component("Chain"))
        assert [name for name, _ in spec.locals] == ["mid"]
        assert [app.component for app in spec.wiring] == ["Pass", "Pass"]
        first, second = spec.wiring
        assert first.inputs == (StreamRef("x", "input"),)
        assert first.outputs == (StreamRef("mid", "local"),)
        assert second.inputs == (StreamRef("mid", "local"),)
        assert second.outputs == (StreamRef("y", "output"),)

    def test_fanout_reuses_the_parent_input(self):
        rm = load_model("fanout.afm")
        spec = lower_composite(rm, rm.component("Fan"))
        assert spec.locals == ()
        assert all(app.inputs == (StreamRef("x", "input"),) for app in spec.wiring)

    def test_every_sub_appears_exactly_once(self):
        rm = load_model("mixedchain.afm")
        spec = lower_composite(rm, rm.component("Mixed"))
        assert sorted(app.instance for app in spec.wiring) == ["d", "p"]

    def test_every_local_is_used_as_an_actual(self, chain):
        spec = lower_composite(chain, chain.component("Chain"))
        actuals = {s.name for app in spec.wiring for s in app.inputs + app.outputs}
        for name, _ in spec.locals:
            assert name in actuals

    def test_rejects_atomics(self, echo):
        with pytest.raises(UnsupportedBody):
            lower_composite(echo, echo.component("Echo"))
