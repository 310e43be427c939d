"""Result focusing: querying a generated result for the decisions that
produced it, instead of stepping through the engine.

Traces live inside the result, so no re-run is needed: selection
expressions come in three views (menu list, marked lattice subgraph,
replay of decision events), structural properties map back to the
(system, feature, statement) that introduced them, and two generation
cycles can be diffed down to the first divergent decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import LatticeError
from .generator import GenerationResult, generate
from .network import NetworkFragment, SystemNetwork
from .semantics import ChooserOutcome, SemanticGraph

# aspect -> realization operators it covers; the union is the full inventory
ASPECT_OPS = {
    "function": ("insert", "conflate"),
    "ordering": ("order", "order-at-front", "order-at-end"),
    "lexical-class": ("classify", "outclassify"),
    "token": ("lexify", "preselect"),
}

VIEWS = ("list", "subgraph", "replay")


def _unit(result: GenerationResult, unit: str):
    if unit not in result.units:
        raise LatticeError("UNKNOWN-UNIT", unit)
    return result.units[unit]


# ---------------------------------------------------------------------------
# Selection-expression views


def selection_expression(
    result: GenerationResult,
    unit: str,
    view: str = "list",
    net: Optional[SystemNetwork] = None,
):
    """The unit's selection expression as a menu list, a marked lattice
    fragment, or the replayable decision-event sequence."""
    record = _unit(result, unit)
    if view == "list":
        return [(e.feature, e.system) for e in record.selection]
    if view == "replay":
        return [e for e in result.events if e.unit == unit]
    if view == "subgraph":
        if net is None:
            raise LatticeError("MISSING-NETWORK", "subgraph view needs the lattice")
        fired = [e.system for e in record.selection if e.system]
        fragment = net.fragment(fired)
        return MarkedFragment(
            fragment=fragment, chosen=tuple(e.feature for e in record.selection)
        )
    raise LatticeError("UNKNOWN-VIEW", view)


@dataclass(frozen=True)
class MarkedFragment:
    fragment: NetworkFragment
    chosen: tuple[str, ...]

    def to_json(self) -> dict:
        doc = self.fragment.to_json()
        doc["chosen"] = list(self.chosen)
        return doc


# ---------------------------------------------------------------------------
# Where-introduced queries


@dataclass
class FocusEntry:
    statement_id: str
    statement: str
    op: str
    system: str
    feature: str
    context: Optional[str] = None  # paradigmatic context of the source system

    def to_json(self) -> dict:
        return {
            "statement-id": self.statement_id,
            "statement": self.statement,
            "op": self.op,
            "system": self.system,
            "feature": self.feature,
            "context": self.context,
        }


@dataclass
class FocusReport:
    unit: str
    aspect: str
    entries: list[FocusEntry] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "unit": self.unit,
            "aspect": self.aspect,
            "entries": [e.to_json() for e in self.entries],
        }


def where_introduced(
    result: GenerationResult,
    unit: str,
    aspect: str,
    net: Optional[SystemNetwork] = None,
) -> FocusReport:
    """All of the unit's constraints matching the aspect, each with the
    system and feature that introduced it and that system's paradigmatic
    context (when the lattice is supplied)."""
    record = _unit(result, unit)
    if aspect not in ASPECT_OPS:
        raise LatticeError("UNKNOWN-ASPECT", aspect)
    ops = ASPECT_OPS[aspect]
    report = FocusReport(unit=unit, aspect=aspect)
    for c in record.constraints:
        if c.statement.op not in ops:
            continue
        context = None
        if net is not None and c.system in net.by_name:
            context = str(net.paradigmatic_context(c.system))
        report.entries.append(
            FocusEntry(
                statement_id=c.statement.id,
                statement=str(c.statement),
                op=c.statement.op,
                system=c.system,
                feature=c.feature,
                context=context,
            )
        )
    return report


def decision_path(result: GenerationResult, unit: str, system: str) -> ChooserOutcome:
    """The recorded chooser path for one fired system, for highlighting."""
    record = _unit(result, unit)
    for entry in record.selection:
        if entry.system == system:
            if entry.outcome is not None:
                return entry.outcome
            return ChooserOutcome(feature=entry.feature)
    raise LatticeError("SYSTEM-NOT-FIRED", f"{system} in {unit}")


# ---------------------------------------------------------------------------
# Trace logs and diffing


def trace_log(result: GenerationResult) -> dict:
    """Exportable decision log (the ``.trace.json`` payload)."""
    unit_paths = {u.id: u.path for u in result.units.values()}
    return {
        "string": result.string,
        "status": result.status,
        "language": result.language,
        "resource-version": {
            "base": result.resource_version[0],
            "patches": list(result.resource_version[1]),
        },
        "units": {
            u.path: [
                {"feature": e.feature, "system": e.system} for e in u.selection
            ]
            for u in result.units.values()
        },
        "events": [
            {**e.to_json(), "unit-path": unit_paths.get(e.unit, e.unit)}
            for e in result.events
        ],
    }


class TraceView:
    """Uniform read view over a live result or a saved trace log."""

    def __init__(self, selections: dict, events: list, base_version: str):
        # selections: unit path -> [(system or None, feature)]
        self.selections = selections
        self.events = events  # [(unit path, system, feature)] in decision order
        self.base_version = base_version

    @staticmethod
    def of(source: Union[GenerationResult, dict]) -> "TraceView":
        if isinstance(source, GenerationResult):
            return TraceView(
                selections={
                    u.path: [(e.system, e.feature) for e in u.selection]
                    for u in source.units.values()
                },
                events=[
                    (source.units[e.unit].path, e.system, e.feature)
                    for e in source.events
                ],
                base_version=source.resource_version[0],
            )
        return TraceView(
            selections={
                path: [(e.get("system"), e["feature"]) for e in entries]
                for path, entries in source.get("units", {}).items()
            },
            events=[
                (e.get("unit-path", e.get("unit")), e["system"], e["feature"])
                for e in source.get("events", ())
            ],
            base_version=source.get("resource-version", {}).get("base", ""),
        )

    def choice(self, path: str, system: str) -> Optional[str]:
        for sys_name, feature in self.selections.get(path, ()):
            if sys_name == system:
                return feature
        return None

    def features(self, path: str) -> set[str]:
        return {f for _, f in self.selections.get(path, ())}


@dataclass
class TraceDiff:
    # (unit path, system, feature in a, feature in b) or None when identical
    first_divergence: Optional[tuple[str, str, Optional[str], Optional[str]]] = None
    unit_differences: dict[str, tuple[set[str], set[str]]] = field(default_factory=dict)
    lineage_warning: Optional[str] = None

    @property
    def identical(self) -> bool:
        return self.first_divergence is None and not self.unit_differences

    def to_json(self) -> dict:
        doc: dict = {
            "first-divergence": None,
            "unit-differences": {
                path: {"only-a": sorted(a), "only-b": sorted(b)}
                for path, (a, b) in sorted(self.unit_differences.items())
            },
        }
        if self.first_divergence:
            path, system, fa, fb = self.first_divergence
            doc["first-divergence"] = {
                "unit": path,
                "system": system,
                "a": fa,
                "b": fb,
            }
        if self.lineage_warning:
            doc["lineage-warning"] = self.lineage_warning
        return doc


def diff_traces(
    a: Union[GenerationResult, dict], b: Union[GenerationResult, dict]
) -> TraceDiff:
    """Contrast two generation cycles.

    Units align by structural function path.  The first divergence is the
    earliest decision (in a's generation order) where the two cycles chose
    different features for the same system of the same unit; the full
    per-unit symmetric feature differences come along for context.
    """
    va, vb = TraceView.of(a), TraceView.of(b)
    diff = TraceDiff()
    if va.base_version and vb.base_version and va.base_version != vb.base_version:
        diff.lineage_warning = (
            f"results from different resource bases ({va.base_version} vs {vb.base_version})"
        )
    for path, system, feature in va.events:
        other = vb.choice(path, system)
        if other != feature:
            diff.first_divergence = (path, system, feature, other)
            break
    else:
        # systems fired only in b
        for path, system, feature in vb.events:
            if va.choice(path, system) != feature:
                diff.first_divergence = (path, system, va.choice(path, system), feature)
                break
    for path in sorted(set(va.selections) | set(vb.selections)):
        fa, fb = va.features(path), vb.features(path)
        if fa != fb:
            diff.unit_differences[path] = (fa - fb, fb - fa)
    return diff


# ---------------------------------------------------------------------------
# Conditional tracing


@dataclass(frozen=True)
class WatchEvent:
    kind: str  # "system" | "inquiry" | "statement"
    name: str
    detail: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "id": self.name, **self.detail}


def conditional_trace(
    resources,
    graph: SemanticGraph,
    language: str,
    watch: Iterable[str],
) -> tuple[GenerationResult, list[WatchEvent]]:
    """Generate normally, emitting an event exactly when a watched system
    fires, a watched inquiry evaluates, or a watched statement applies."""
    watch = set(watch)
    net = resources.network(language)
    known = set(net.by_name)
    known.update(resources.inquiries(language))
    for system in net.systems:
        for output in system.outputs:
            for r in output.realizations:
                known.add(r.id)
    unknown = watch - known
    if unknown:
        raise LatticeError("UNKNOWN-WATCH-ID", ", ".join(sorted(unknown)))
    events: list[WatchEvent] = []

    def observer(kind: str, name: str, detail: dict) -> None:
        if name in watch:
            events.append(WatchEvent(kind=kind, name=name, detail=dict(detail)))

    result = generate(resources, graph, language, observer=observer)
    return result, events
