from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from latticegen.errors import LatticeError
from latticegen.network import (
    Cond,
    Lexeme,
    Output,
    Realization,
    System,
    SystemNetwork,
    validate_network,
)


def cond_strategy(depth=2):
    leaf = st.sampled_from(["a", "b", "c", "d"]).map(Cond.feature)
    if depth == 0:
        return leaf
    sub = cond_strategy(depth - 1)
    return st.one_of(
        leaf,
        st.just(Cond.TRUE),
        st.lists(sub, min_size=1, max_size=3).map(lambda ps: Cond.all_of(*ps)),
        st.lists(sub, min_size=1, max_size=3).map(lambda ps: Cond.any_of(*ps)),
    )


class TestCond:
    def test_evaluate_basics(self):
        c = Cond.all_of(Cond.feature("a"), Cond.any_of(Cond.feature("b"), Cond.feature("c")))
        assert c.evaluate({"a", "b"})
        assert c.evaluate({"a", "c"})
        assert not c.evaluate({"a"})
        assert not c.evaluate({"b", "c"})

    def test_true_always_holds(self):
        assert Cond.TRUE.evaluate(set())
        assert Cond.TRUE.evaluate({"x"})

    def test_json_round_trip(self):
        docs = [
            True,
            "clause",
            {"and": ["a", {"or": ["b", "c"]}]},
            {"or": [{"and": ["a", "b"]}, "c"]},
        ]
        for doc in docs:
            assert Cond.from_json(doc).to_json() == doc

    def test_bad_condition(self):
        with pytest.raises(LatticeError) as err:
            Cond.from_json({"nand": ["a"]})
        assert err.value.code == "BAD-CONDITION"

    @given(cond_strategy(), st.sets(st.sampled_from(["a", "b", "c", "d"])))
    def test_normalized_preserves_semantics(self, cond, selected):
        assert cond.normalized().evaluate(selected) == cond.evaluate(selected)

    @given(cond_strategy())
    def test_normalization_is_idempotent(self, cond):
        once = cond.normalized()
        assert once.normalized() == once

    def test_string_rendering(self):
        c = Cond.any_of(Cond.all_of(Cond.feature("a"), Cond.feature("b")), Cond.feature("c"))
        assert str(c) == "(a & b) | c"


class TestRealization:
    def test_order_round_trip(self):
        doc = {"op": "order", "before": "Subject", "after": "Finite"}
        r = Realization.from_json(doc)
        assert r.function == "Subject" and r.partner == "Finite"
        assert r.to_json() == doc

    def test_unknown_operator(self):
        with pytest.raises(LatticeError) as err:
            Realization.from_json({"op": "delete", "function": "X"})
        assert err.value.code == "BAD-REALIZATION"

    def test_all_nine_operators_parse(self):
        docs = [
            {"op": "insert", "function": "F"},
            {"op": "conflate", "function": "F", "with": "G"},
            {"op": "order", "before": "F", "after": "G"},
            {"op": "order-at-front", "function": "F"},
            {"op": "order-at-end", "function": "F"},
            {"op": "preselect", "function": "F", "features": ["x"]},
            {"op": "classify", "function": "F", "class": "k"},
            {"op": "outclassify", "function": "F", "class": "k"},
            {"op": "lexify", "function": "F", "lexeme": "w"},
        ]
        for doc in docs:
            assert Realization.from_json(doc).op == doc["op"]


def simple_net():
    s_root = System("ROOT", Cond.TRUE, (Output("clause"), Output("group")), region="A")
    s_mood = System(
        "MOOD", Cond.feature("clause"),
        (Output("decl"), Output("inter")), region="A",
    )
    s_sub = System(
        "SUB", Cond.all_of(Cond.feature("decl")),
        (Output("leafy"),), region="B",
    )
    return SystemNetwork((s_root, s_mood, s_sub), "start", "en")


class TestTraversalQueries:
    def test_empty_selection_enters_nothing(self):
        net = simple_net()
        assert net.entered_systems(set()) == []

    def test_entry_gating(self):
        net = simple_net()
        entered = [s.name for s in net.entered_systems({"start"})]
        assert entered == ["ROOT"]
        entered = [s.name for s in net.entered_systems({"start", "clause"}, {"ROOT"})]
        assert entered == ["MOOD"]

    def test_order_is_topological_and_deterministic(self):
        net = simple_net()
        assert net.system_index("ROOT") < net.system_index("MOOD")
        assert net.system_index("MOOD") < net.system_index("SUB")
        net2 = SystemNetwork(tuple(reversed(net.systems)), "start", "en")
        assert net2._topo_index == net._topo_index

    def test_paradigmatic_context(self):
        net = simple_net()
        assert str(net.paradigmatic_context("ROOT")) == "TRUE"
        assert str(net.paradigmatic_context("SUB")) == "decl"
        with pytest.raises(LatticeError) as err:
            net.paradigmatic_context("NOPE")
        assert err.value.code == "UNKNOWN-SYSTEM"

    def test_lattice_subgraph_radius(self):
        net = simple_net()
        frag = net.lattice_subgraph("MOOD", 0)
        assert frag.system_names() == ["MOOD"]
        frag = net.lattice_subgraph("MOOD", 1)
        assert set(frag.system_names()) == {"ROOT", "MOOD", "SUB"}
        frag = net.lattice_subgraph("decl", -1)
        assert set(frag.system_names()) == {"ROOT", "MOOD", "SUB"}
        with pytest.raises(LatticeError) as err:
            net.lattice_subgraph("nope", 1)
        assert err.value.code == "UNKNOWN-FOCUS"

    def test_fragment_boundary_stubs(self):
        net = simple_net()
        frag = net.fragment(["SUB"])
        assert [p.feature for p in frag.boundary] == ["decl"]
        assert frag.boundary[0].owner_system == "MOOD"


class TestValidation:
    def test_fixture_network_is_clean(self, en_resources):
        report = en_resources.validate()
        assert report.ok, report.to_json()

    def test_self_loop_reports_single_cycle_error(self):
        s = System("LOOP", Cond.feature("x"), (Output("x"),), region="A")
        net = SystemNetwork((s,), "start", "en")
        report = validate_network(net)
        codes = [c for c, _, _ in report.errors]
        assert codes == ["CYCLE"]

    def test_dangling_entry_reference(self):
        s = System("ROOT", Cond.TRUE, (Output("a"),), region="A")
        t = System("T", Cond.feature("ghost"), (Output("b"),), region="A")
        net = SystemNetwork((s, t), "start", "en")
        report = validate_network(net)
        assert any(c == "DANGLING-REF" for c, _, _ in report.errors)

    def test_duplicate_feature_ownership(self):
        s = System("ROOT", Cond.TRUE, (Output("a"),), region="A")
        t = System("T", Cond.feature("a"), (Output("a"),), region="A")
        net = SystemNetwork((s, t), "start", "en")
        report = validate_network(net)
        assert any(c == "DUPLICATE-FEATURE" for c, _, _ in report.errors)

    def test_multiple_roots(self):
        s = System("R1", Cond.TRUE, (Output("a"),), region="A")
        t = System("R2", Cond.TRUE, (Output("b"),), region="A")
        net = SystemNetwork((s, t), "start", "en")
        report = validate_network(net)
        assert any(c == "MULTIPLE-ROOTS" for c, _, _ in report.errors)

    def test_unreachable_feature(self):
        # an entry over a feature nobody owns can never be satisfied, so the
        # system's own outputs are unreachable (alongside the dangling ref)
        s = System("ROOT", Cond.TRUE, (Output("a"),), region="A")
        t = System("T", Cond.feature("ghost"), (Output("b"),), region="A")
        net = SystemNetwork((s, t), "start", "en")
        report = validate_network(net)
        assert any(c == "UNREACHABLE" and o == "b" for c, o, _ in report.errors)

    def test_empty_network(self):
        net = SystemNetwork((), "start", "en")
        report = validate_network(net)
        assert any(c == "NO-ROOT" for c, _, _ in report.errors)

    def test_missing_region_tag(self):
        s = System("ROOT", Cond.TRUE, (Output("a"),))
        net = SystemNetwork((s,), "start", "en")
        report = validate_network(net)
        assert any(c == "MISSING-REGION-TAG" for c, _, _ in report.errors)

    def test_lexeme_without_base_form(self):
        s = System("ROOT", Cond.TRUE, (Output("a"),), region="A")
        net = SystemNetwork((s,), "start", "en")
        lx = Lexeme("w", "w", forms=((frozenset(["x"]), "wx"),))
        report = validate_network(net, [lx])
        assert any(c == "NO-BASE-FORM" for c, _, _ in report.errors)

    def test_random_dags_validate_acyclic(self):
        from conftest import random_network

        rng = random.Random(7)
        for _ in range(25):
            net = random_network(rng, rng.randint(2, 10))
            report = validate_network(net)
            assert not any(c == "CYCLE" for c, _, _ in report.errors)
