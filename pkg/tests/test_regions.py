from __future__ import annotations

import random

import pytest

from conftest import random_network
from latticegen.errors import LatticeError
from latticegen.network import SystemNetwork
from latticegen.regions import (
    export_graph,
    region_balance,
    region_graph,
    region_view,
)


def brute_force_region_graph(net: SystemNetwork):
    """Independent recomputation: a double loop over every system and every
    entry-condition leaf / preselect target."""
    owner_region = {}
    for s in net.systems:
        for o in s.outputs:
            if o.feature not in owner_region:
                owner_region[o.feature] = s.region
    edges: dict[tuple[str, str], int] = {}
    for s in net.systems:
        for leaf in s.entry.features():
            src = owner_region.get(leaf)
            if src is not None and src != s.region:
                edges[(src, s.region)] = edges.get((src, s.region), 0) + 1
        for o in s.outputs:
            for r in o.realizations:
                if r.op != "preselect":
                    continue
                for f in r.features:
                    dst = owner_region.get(f)
                    if dst is not None and dst != s.region:
                        edges[(s.region, dst)] = edges.get((s.region, dst), 0) + 1
    return sorted({s.region for s in net.systems}), edges


class TestRegionGraph:
    def test_fixture_graph_matches_hand_audit(self, en_network):
        rg = region_graph(en_network)
        assert rg.nodes == ["MOOD", "NOMINAL-GROUP", "THEME", "TRANSITIVITY"]
        assert rg.edges == {
            ("MOOD", "NOMINAL-GROUP"): 1,
            ("MOOD", "THEME"): 1,
            ("MOOD", "TRANSITIVITY"): 1,
            ("TRANSITIVITY", "MOOD"): 1,
        }

    def test_fixture_graph_equals_brute_force(self, en_network):
        rg = region_graph(en_network)
        nodes, edges = brute_force_region_graph(en_network)
        assert rg.nodes == nodes
        assert rg.edges == edges

    def test_random_networks_equal_brute_force(self):
        rng = random.Random(99)
        for _ in range(100):
            net = random_network(rng, rng.randint(2, 12))
            rg = region_graph(net)
            nodes, edges = brute_force_region_graph(net)
            assert rg.nodes == nodes
            assert rg.edges == edges

    def test_missing_region_tag_rejected(self):
        from latticegen.network import Cond, Output, System

        net = SystemNetwork(
            (System("S", Cond.TRUE, (Output("a"),)),), "start", "en"
        )
        with pytest.raises(LatticeError) as err:
            region_graph(net)
        assert err.value.code == "MISSING-REGION-TAG"


class TestRegionView:
    def test_views_partition_the_network(self, en_network):
        rg = region_graph(en_network)
        seen: list[str] = []
        for region in rg.nodes:
            frag = region_view(en_network, region)
            seen.extend(frag.system_names())
        assert sorted(seen) == sorted(s.name for s in en_network.systems)
        assert len(seen) == len(set(seen))

    def test_boundary_stub_counts(self, en_network):
        expected = {
            "MOOD": 0,
            "TRANSITIVITY": 2,  # clause entry + nominal-group preselect
            "THEME": 1,  # declarative entry
            "NOMINAL-GROUP": 1,  # nominal-group entry
        }
        for region, count in expected.items():
            frag = region_view(en_network, region)
            assert len(frag.boundary) == count, region

    def test_unknown_region(self, en_network):
        with pytest.raises(LatticeError) as err:
            region_view(en_network, "PHONOLOGY")
        assert err.value.code == "UNKNOWN-REGION"


class TestRegionBalance:
    def test_fixture_is_internally_cohesive(self, en_network):
        balance = region_balance(en_network)
        assert set(balance) == {"MOOD", "TRANSITIVITY", "THEME", "NOMINAL-GROUP"}
        for region, (intra, inter) in balance.items():
            assert intra > inter, f"{region}: intra {intra} <= inter {inter}"


class TestExport:
    def test_dot_is_deterministic(self, en_network):
        rg = region_graph(en_network)
        assert export_graph(rg, "dot") == export_graph(rg, "dot")
        dot = export_graph(rg, "dot")
        assert dot.startswith("digraph")
        assert '"MOOD" -> "TRANSITIVITY" [label="1"];' in dot

    def test_json_export(self, en_network):
        rg = region_graph(en_network)
        out = export_graph(rg, "json")
        assert '"nodes"' in out and out.endswith("\n")

    def test_fragment_export(self, en_network):
        frag = region_view(en_network, "THEME")
        dot = export_graph(frag, "dot")
        assert '"THEME-MARKEDNESS" [shape=box];' in dot
        assert "style=dashed" in dot  # boundary stub for declarative

    def test_unknown_format(self, en_network):
        with pytest.raises(LatticeError) as err:
            export_graph(region_graph(en_network), "svg")
        assert err.value.code == "UNKNOWN-FORMAT"
