"""Feature-indexed regression suites.

An example is minimally a semantic specification plus the string it should
produce; the full decision trace of the recording generation rides along.
Examples index by every grammatical feature selected during generation, so
the consequences of any feature can be pulled up while debugging.  Suite
runs regenerate every example and, on a mismatch, localize the first
divergent decision against the recorded trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import LatticeError
from .generator import GenerationResult, generate
from .semantics import parse_spl
from .trace import diff_traces, trace_log


@dataclass
class Example:
    name: str
    spl: str
    language: str
    expected: str
    # unit path -> [(feature, system or None)]
    selections: dict[str, list[tuple[str, Optional[str]]]]
    trace: dict  # recorded decision log

    def features(self) -> set[str]:
        return {f for entries in self.selections.values() for f, _ in entries}

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "spl": self.spl,
            "language": self.language,
            "expected": self.expected,
            "selections": {
                path: [{"feature": f, "system": s} for f, s in entries]
                for path, entries in sorted(self.selections.items())
            },
            "trace": self.trace,
        }

    @staticmethod
    def from_json(doc: dict) -> "Example":
        return Example(
            name=doc["name"],
            spl=doc["spl"],
            language=doc["language"],
            expected=doc["expected"],
            selections={
                path: [(e["feature"], e.get("system")) for e in entries]
                for path, entries in doc.get("selections", {}).items()
            },
            trace=doc.get("trace", {}),
        )


@dataclass
class Suite:
    """Ordered example collection with an incrementally maintained
    feature -> example-names index."""

    name: str = "suite"
    examples: list[Example] = field(default_factory=list)
    index: dict[str, set[str]] = field(default_factory=dict)

    def names(self) -> list[str]:
        return [e.name for e in self.examples]

    def example(self, name: str) -> Example:
        for e in self.examples:
            if e.name == name:
                return e
        raise LatticeError("UNKNOWN-EXAMPLE", name)

    def _index_example(self, example: Example) -> None:
        for feature in example.features():
            self.index.setdefault(feature, set()).add(example.name)

    def add(self, example: Example) -> None:
        if any(e.name == example.name for e in self.examples):
            raise LatticeError("DUPLICATE-NAME", example.name)
        self.examples.append(example)
        self._index_example(example)

    def rebuild_index(self) -> dict[str, set[str]]:
        """Brute-force index rebuild, the oracle for the incremental one."""
        fresh: dict[str, set[str]] = {}
        for e in self.examples:
            for feature in e.features():
                fresh.setdefault(feature, set()).add(e.name)
        return fresh

    # -- persistence --------------------------------------------------------

    def to_json(self) -> list:
        return [e.to_json() for e in self.examples]

    def index_json(self) -> dict:
        return {f: sorted(names) for f, names in sorted(self.index.items())}

    @staticmethod
    def from_json(doc: list, name: str = "suite") -> "Suite":
        suite = Suite(name=name)
        for entry in doc:
            suite.add(Example.from_json(entry))
        return suite

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
        if path.endswith(".suite.json"):
            index_path = path[: -len(".suite.json")] + ".index.json"
        else:
            index_path = path + ".index.json"
        with open(index_path, "w", encoding="utf-8") as fh:
            json.dump(self.index_json(), fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")

    @staticmethod
    def load(path: str) -> "Suite":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        name = path.rsplit("/", 1)[-1]
        for suffix in (".suite.json", ".json"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
                break
        return Suite.from_json(doc, name=name)


def record_example(
    result: GenerationResult, name: str, suite: Suite, spl: str = ""
) -> Example:
    """Freeze a complete generation into the suite under ``name``.

    ``spl`` is the semantic specification text the result was generated
    from; the result itself only carries the resolved graph.
    """
    if not result.complete:
        raise LatticeError("PARTIAL-RESULT", result.reason or "generation incomplete")
    if any(e.name == name for e in suite.examples):
        raise LatticeError("DUPLICATE-NAME", name)
    example = Example(
        name=name,
        spl=spl,
        language=result.language,
        expected=result.string,
        selections={
            u.path: [(e.feature, e.system) for e in u.selection]
            for u in result.units.values()
        },
        trace=trace_log(result),
    )
    suite.add(example)
    return example


@dataclass
class ExampleResult:
    name: str
    passed: bool
    expected: str
    actual: str
    diff: Optional[dict] = None  # diff_traces payload on failure

    def to_json(self) -> dict:
        doc: dict = {
            "name": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "expected": self.expected,
            "actual": self.actual,
        }
        if self.diff is not None:
            doc["diff"] = self.diff
        return doc


@dataclass
class SuiteReport:
    suite: str
    results: list[ExampleResult] = field(default_factory=list)
    coverage_gaps: list[str] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if not r.passed)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> list:
        return [r.to_json() for r in self.results]

    def summary(self) -> str:
        return f"{self.passed}/{len(self.results)} PASS"


def run_suite(resources, suite: Suite, coverage: bool = True) -> SuiteReport:
    """Regenerate every example; byte-equal strings pass, everything else
    fails with the first divergent decision attached."""
    report = SuiteReport(suite=suite.name)
    for example in suite.examples:
        graph = parse_spl(example.spl)
        result = generate(resources, graph, example.language)
        if result.string == example.expected and result.complete:
            report.results.append(
                ExampleResult(example.name, True, example.expected, result.string)
            )
        else:
            diff = diff_traces(result, example.trace)
            report.results.append(
                ExampleResult(
                    example.name,
                    False,
                    example.expected,
                    result.string,
                    diff=diff.to_json(),
                )
            )
    if coverage and suite.examples:
        covered = set(suite.index)
        all_features: set[str] = set()
        for lang in sorted({e.language for e in suite.examples}):
            net = resources.network(lang)
            for system in net.systems:
                all_features.update(system.output_features())
        report.coverage_gaps = sorted(all_features - covered)
    return report


def examples_for(feature: str, suite: Suite, resources=None, language: Optional[str] = None) -> list[str]:
    """Example names whose recorded selection expressions contain the
    feature.  When resources are supplied, unknown features are rejected."""
    if resources is not None:
        langs = [language] if language else sorted(resources.languages)
        known: set[str] = set()
        for lang in langs:
            net = resources.network(lang)
            known.add(net.root_feature)
            for system in net.systems:
                known.update(system.output_features())
        if feature not in known:
            raise LatticeError("UNKNOWN-FEATURE", feature)
    return sorted(suite.index.get(feature, ()))
