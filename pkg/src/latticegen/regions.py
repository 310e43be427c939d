"""Functional-region modularity: the region connectivity graph, region-scoped
lattice views with boundary pointers, and graph exports.

Edge direction follows information flow: an edge A -> B (weight w) means
systems in B have w entry-condition references to features owned by A, i.e.
B depends on choices made in A.  Preselections flow the other way around:
the preselecting region feeds the owner's sub-unit traversal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import LatticeError
from .network import NetworkFragment, SystemNetwork


@dataclass
class RegionGraph:
    nodes: list[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [
                {"from": a, "to": b, "weight": w}
                for (a, b), w in sorted(self.edges.items())
            ],
        }


def region_graph(net: SystemNetwork) -> RegionGraph:
    """Cross-region dependency edges with reference-count weights."""
    for s in net.systems:
        if not s.region:
            raise LatticeError("MISSING-REGION-TAG", s.name)
    nodes = sorted({s.region for s in net.systems})
    edges: dict[tuple[str, str], int] = {}

    def bump(a: str, b: str) -> None:
        if a != b:
            edges[(a, b)] = edges.get((a, b), 0) + 1

    for s in net.systems:
        for f in s.entry.features():
            owner = net.feature_owner.get(f)
            if owner is not None:
                bump(owner.region, s.region)
        for o in s.outputs:
            for r in o.realizations:
                if r.op != "preselect":
                    continue
                for f in r.features:
                    owner = net.feature_owner.get(f)
                    if owner is not None:
                        bump(s.region, owner.region)
    return RegionGraph(nodes=nodes, edges=edges)


def region_view(net: SystemNetwork, region: str) -> NetworkFragment:
    """All systems of the region plus boundary stubs for every external
    feature they reference or preselect."""
    members = [s.name for s in net.systems if s.region == region]
    if not members:
        raise LatticeError("UNKNOWN-REGION", region)
    return net.fragment(members)


def region_balance(net: SystemNetwork) -> dict[str, tuple[int, int]]:
    """Resource lint: (intra, inter) reference counts per region.  Functional
    regions should show strong internal and weak external coupling."""
    counts: dict[str, list[int]] = {s.region: [0, 0] for s in net.systems}
    for s in net.systems:
        refs = list(s.entry.features())
        for o in s.outputs:
            for r in o.realizations:
                if r.op == "preselect":
                    refs.extend(r.features)
        for f in refs:
            owner = net.feature_owner.get(f)
            if owner is None:
                continue
            if owner.region == s.region:
                counts[s.region][0] += 1
            else:
                counts[s.region][1] += 1
    return {region: (intra, inter) for region, (intra, inter) in counts.items()}


def export_graph(obj, format: str = "dot") -> str:
    """Deterministic DOT or JSON serialization of a region graph or a
    lattice fragment."""
    if format == "json":
        return json.dumps(obj.to_json(), sort_keys=True, indent=2) + "\n"
    if format != "dot":
        raise LatticeError("UNKNOWN-FORMAT", format)
    lines = ["digraph lattice {"]
    if isinstance(obj, RegionGraph):
        for node in sorted(obj.nodes):
            lines.append(f'  "{node}";')
        for (a, b), w in sorted(obj.edges.items()):
            lines.append(f'  "{a}" -> "{b}" [label="{w}"];')
    elif isinstance(obj, NetworkFragment):
        for s in obj.systems:
            lines.append(f'  "{s.name}" [shape=box];')
        for s in obj.systems:
            for f in sorted(set(s.entry.features())):
                lines.append(f'  "{f}" -> "{s.name}";')
            for o in s.outputs:
                lines.append(f'  "{s.name}" -> "{o.feature}";')
        for p in sorted(obj.boundary, key=lambda p: (p.from_system, p.feature)):
            lines.append(
                f'  "{p.feature}" [style=dashed, label="{p.feature} ({p.owner_region or "?"})"];'
            )
    else:
        raise LatticeError("UNKNOWN-GRAPH", type(obj).__name__)
    lines.append("}")
    return "\n".join(lines) + "\n"
