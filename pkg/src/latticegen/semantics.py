"""Semantic input and the decision machinery that makes traversal
deterministic.

The input notation is a parenthesized typed term graph::

    (e / chase :actor (c / cat) :actee (m / mouse) :tense past)

``#id`` re-references an earlier entity.  Inquiries are declarative rule
lists over an entity's type and attributes; choosers are decision trees of
inquiry invocations whose leaves pick exactly one feature of a system and
may bind grammatical functions to semantic entities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import LatticeError, SyntaxProblem
from .network import System, ValidationReport


# ---------------------------------------------------------------------------
# Semantic graphs


@dataclass
class Entity:
    id: str
    type: str
    attributes: dict[str, object] = field(default_factory=dict)  # atom or Entity


@dataclass
class SemanticGraph:
    entities: dict[str, Entity]
    root: str

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise LatticeError("UNKNOWN-ENTITY", entity_id) from None

    def resolve_path(self, start: str, path: Iterable[str]) -> Optional[Entity]:
        """Follow attribute names from ``start``; None when a step is missing
        or lands on an atom."""
        current = self.entity(start)
        for step in path:
            value = current.attributes.get(step)
            if not isinstance(value, Entity):
                return None
            current = value
        return current


class _SplScanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> SyntaxProblem:
        return SyntaxProblem(message, self.line, self.col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        if not ch:
            raise self.error("unexpected end of input")
        self.pos += 1
        self.col += 1
        return ch

    def token(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace() and self.text[self.pos] not in "()":
            self.pos += 1
            self.col += 1
        if start == self.pos:
            raise self.error("expected a token")
        return self.text[start:self.pos]


def parse_spl(text: str) -> SemanticGraph:
    """Parse the parenthesized notation into a resolved graph."""
    sc = _SplScanner(text)
    entities: dict[str, Entity] = {}

    def parse_entity() -> Entity:
        sc.skip_ws()
        if sc.peek() != "(":
            raise sc.error("expected '('")
        sc.take()
        sc.skip_ws()
        ent_id = sc.token()
        sc.skip_ws()
        if sc.peek() != "/":
            raise sc.error("expected '/' after entity id")
        sc.take()
        sc.skip_ws()
        ent_type = sc.token()
        if ent_id in entities:
            raise sc.error(f"duplicate entity id {ent_id}")
        ent = Entity(ent_id, ent_type)
        entities[ent_id] = ent
        while True:
            sc.skip_ws()
            ch = sc.peek()
            if ch == ")":
                sc.take()
                return ent
            if ch == "":
                raise sc.error("unbalanced parentheses")
            role = sc.token()
            if not role.startswith(":"):
                raise sc.error(f"expected role, got {role!r}")
            role = role[1:]
            if role in ent.attributes:
                raise sc.error(f"duplicate role :{role} on {ent_id}")
            sc.skip_ws()
            if sc.peek() == "(":
                ent.attributes[role] = parse_entity()
            else:
                value = sc.token()
                if value.startswith("#"):
                    ref = value[1:]
                    if ref not in entities:
                        raise LatticeError("UNRESOLVED-REF", f"#{ref}")
                    ent.attributes[role] = entities[ref]
                else:
                    ent.attributes[role] = value

    root = parse_entity()
    sc.skip_ws()
    if sc.peek():
        raise sc.error("trailing input after root entity")
    return SemanticGraph(entities=entities, root=root.id)


# ---------------------------------------------------------------------------
# Inquiries


@dataclass(frozen=True)
class InquiryRule:
    """One condition row: all present tests must hold on the bound entity."""

    param: str
    answer: str
    type_is: Optional[str] = None
    attribute: Optional[str] = None
    equals: Optional[str] = None
    exists: bool = False

    def matches(self, bindings: dict[str, Entity]) -> bool:
        ent = bindings.get(self.param)
        if ent is None:
            return False
        if self.type_is is not None and ent.type != self.type_is:
            return False
        if self.attribute is not None:
            value = ent.attributes.get(self.attribute)
            if self.exists:
                return value is not None
            if self.equals is not None:
                return value == self.equals
            return value is not None
        return True

    @staticmethod
    def from_json(doc: dict) -> "InquiryRule":
        return InquiryRule(
            param=doc["param"],
            answer=doc["answer"],
            type_is=doc.get("type"),
            attribute=doc.get("attribute"),
            equals=doc.get("equals"),
            exists=bool(doc.get("exists", False)),
        )

    def to_json(self) -> dict:
        doc: dict = {"param": self.param, "answer": self.answer}
        if self.type_is is not None:
            doc["type"] = self.type_is
        if self.attribute is not None:
            doc["attribute"] = self.attribute
        if self.equals is not None:
            doc["equals"] = self.equals
        if self.exists:
            doc["exists"] = True
        return doc


@dataclass(frozen=True)
class Inquiry:
    name: str
    parameters: tuple[str, ...]
    answers: tuple[str, ...]
    default: str
    rules: tuple[InquiryRule, ...] = ()
    languages: frozenset[str] = frozenset()

    @staticmethod
    def from_json(doc: dict, languages: frozenset[str] = frozenset()) -> "Inquiry":
        return Inquiry(
            name=doc["name"],
            parameters=tuple(doc.get("parameters", ())),
            answers=tuple(doc["answers"]),
            default=doc["default"],
            rules=tuple(InquiryRule.from_json(r) for r in doc.get("rules", ())),
            languages=frozenset(doc.get("languages", ())) or languages,
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "parameters": list(self.parameters),
            "answers": list(self.answers),
            "default": self.default,
            "rules": [r.to_json() for r in self.rules],
        }


def evaluate_inquiry(
    inq: Inquiry, bindings: dict[str, Entity], graph: SemanticGraph
) -> str:
    """First matching rule wins; otherwise the default answer."""
    for p in inq.parameters:
        if p not in bindings:
            raise LatticeError("UNBOUND-PARAMETER", f"{inq.name}: {p}")
    for rule in inq.rules:
        if rule.matches(bindings):
            return rule.answer
    return inq.default


# ---------------------------------------------------------------------------
# Choosers


@dataclass(frozen=True)
class ChooserNode:
    """Internal node: ask an inquiry with parameter bindings (attribute paths
    from the unit's entity), branch by answer.  Leaf: choose a feature and
    optionally identify grammatical functions with semantic entities."""

    ask: Optional[str] = None
    bindings: tuple[tuple[str, tuple[str, ...]], ...] = ()
    branches: tuple[tuple[str, "ChooserNode"], ...] = ()
    choose: Optional[str] = None
    identify: tuple[tuple[str, tuple[str, ...]], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.choose is not None

    @staticmethod
    def from_json(doc: dict) -> "ChooserNode":
        if "choose" in doc:
            return ChooserNode(
                choose=doc["choose"],
                identify=tuple(
                    (fn, tuple(path)) for fn, path in sorted(doc.get("identify", {}).items())
                ),
            )
        return ChooserNode(
            ask=doc["ask"],
            bindings=tuple(
                (p, tuple(path)) for p, path in sorted(doc.get("bindings", {}).items())
            ),
            branches=tuple(
                (ans, ChooserNode.from_json(sub))
                for ans, sub in sorted(doc.get("branches", {}).items())
            ),
        )

    def to_json(self) -> dict:
        if self.is_leaf:
            doc: dict = {"choose": self.choose}
            if self.identify:
                doc["identify"] = {fn: list(path) for fn, path in self.identify}
            return doc
        return {
            "ask": self.ask,
            "bindings": {p: list(path) for p, path in self.bindings},
            "branches": {ans: sub.to_json() for ans, sub in self.branches},
        }


@dataclass(frozen=True)
class Chooser:
    name: str
    tree: ChooserNode
    languages: frozenset[str] = frozenset()

    @staticmethod
    def from_json(doc: dict) -> "Chooser":
        return Chooser(
            name=doc["name"],
            tree=ChooserNode.from_json(doc["tree"]),
            languages=frozenset(doc.get("languages", ())),
        )

    def to_json(self) -> dict:
        return {"name": self.name, "tree": self.tree.to_json()}


@dataclass
class ChooserOutcome:
    """The decision record for one system: chosen feature, function/entity
    identifications, and the inquiry path that led there."""

    feature: str
    identifications: list[tuple[str, str]] = field(default_factory=list)
    # (inquiry name, bindings as {param: entity id}, answer)
    path: list[tuple[str, dict[str, str], str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "feature": self.feature,
            "identifications": [
                {"function": fn, "entity": eid} for fn, eid in self.identifications
            ],
            "path": [
                {"inquiry": name, "bindings": dict(b), "answer": ans}
                for name, b, ans in self.path
            ],
        }


def default_outcome(system: System) -> ChooserOutcome:
    """Fallback for systems without a chooser: the first output feature."""
    return ChooserOutcome(feature=system.outputs[0].feature)


def run_chooser(
    ch: Chooser,
    system: System,
    entity_id: str,
    graph: SemanticGraph,
    inquiries: dict[str, Inquiry],
    on_inquiry=None,
) -> ChooserOutcome:
    """Walk the decision tree.  ``on_inquiry`` (optional) is called with the
    inquiry name after each evaluation, for conditional tracing."""
    node = ch.tree
    path: list[tuple[str, dict[str, str], str]] = []
    warnings: list[str] = []
    while not node.is_leaf:
        inq = inquiries.get(node.ask)
        if inq is None:
            raise LatticeError("DANGLING-REF", f"chooser {ch.name}: inquiry {node.ask}")
        bound: dict[str, Entity] = {}
        for param, attr_path in node.bindings:
            target = graph.resolve_path(entity_id, attr_path)
            if target is None:
                raise LatticeError(
                    "UNBOUND-PARAMETER",
                    f"chooser {ch.name}: cannot bind {param} via {list(attr_path)}",
                )
            bound[param] = target
        answer = evaluate_inquiry(inq, bound, graph)
        if on_inquiry is not None:
            on_inquiry(inq.name, answer)
        path.append((inq.name, {p: e.id for p, e in bound.items()}, answer))
        branches = dict(node.branches)
        if answer not in branches:
            raise LatticeError(
                "MISSING-BRANCH", f"chooser {ch.name}: no branch for {answer!r}"
            )
        node = branches[answer]
    identifications: list[tuple[str, str]] = []
    for fn, attr_path in node.identify:
        target = graph.resolve_path(entity_id, attr_path)
        if target is None:
            # degrade: fall back to the unit's own entity
            target = graph.entity(entity_id)
        identifications.append((fn, target.id))
    return ChooserOutcome(feature=node.choose, identifications=identifications, path=path)


def validate_chooser(ch: Chooser, system: System, report: ValidationReport) -> None:
    """Total branching and leaf discipline, checked against the owning system."""
    outputs = set(system.output_features())

    def walk(node: ChooserNode) -> None:
        if node.is_leaf:
            if node.choose not in outputs:
                report.error(
                    "BAD-CHOICE",
                    ch.name,
                    f"leaf chooses {node.choose}, not an output of {system.name}",
                )
            return
        branch_answers = {ans for ans, _ in node.branches}
        # answer coverage is checked against the inquiry where available;
        # the resource loader passes inquiries through validate_resources.
        for _, sub in node.branches:
            walk(sub)
        if not branch_answers:
            report.error("EMPTY-NODE", ch.name, f"node {node.ask} has no branches")

    walk(ch.tree)


def validate_chooser_answers(
    ch: Chooser, inquiries: dict[str, Inquiry], report: ValidationReport
) -> None:
    """Every internal node must cover all answers of its inquiry."""

    def walk(node: ChooserNode) -> None:
        if node.is_leaf:
            return
        inq = inquiries.get(node.ask)
        if inq is None:
            report.error("DANGLING-REF", ch.name, f"unknown inquiry {node.ask}")
            return
        covered = {ans for ans, _ in node.branches}
        missing = set(inq.answers) - covered
        for ans in sorted(missing):
            report.error(
                "MISSING-BRANCH", ch.name, f"node {node.ask} lacks branch {ans!r}"
            )
        extra = covered - set(inq.answers)
        for ans in sorted(extra):
            report.warn(
                "UNKNOWN-BRANCH", ch.name, f"node {node.ask} has spurious branch {ans!r}"
            )
        for _, sub in node.branches:
            walk(sub)

    walk(ch.tree)
