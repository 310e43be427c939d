"""The paradigmatic type lattice: systems, features, entry conditions,
realization statements, lexemes, and the static queries over them.

A network is a set of systems (disjunctions).  Each system is gated by an
entry condition (a boolean AND/OR tree over feature names, no negation) and
offers one or more output features, each carrying a list of realization
statements.  Traversal selects one output per entered system; the chosen
features accumulate into a selection expression.

Networks are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import LatticeError

INFINITE_RADIUS = -1

# The nine supported realization operators.
OPERATORS = (
    "insert",
    "conflate",
    "order",
    "order-at-front",
    "order-at-end",
    "preselect",
    "classify",
    "outclassify",
    "lexify",
)


# ---------------------------------------------------------------------------
# Entry conditions


@dataclass(frozen=True)
class Cond:
    """Boolean tree over feature names: TRUE, a leaf, or an AND/OR node."""

    kind: str  # "true" | "feature" | "and" | "or"
    name: Optional[str] = None
    parts: tuple["Cond", ...] = ()

    TRUE: "Cond" = None  # set below

    @staticmethod
    def feature(name: str) -> "Cond":
        return Cond("feature", name=name)

    @staticmethod
    def all_of(*parts: "Cond") -> "Cond":
        return Cond("and", parts=tuple(parts))

    @staticmethod
    def any_of(*parts: "Cond") -> "Cond":
        return Cond("or", parts=tuple(parts))

    def evaluate(self, selected: Iterable[str]) -> bool:
        se = selected if isinstance(selected, (set, frozenset)) else set(selected)
        if self.kind == "true":
            return True
        if self.kind == "feature":
            return self.name in se
        if self.kind == "and":
            return all(p.evaluate(se) for p in self.parts)
        if self.kind == "or":
            return any(p.evaluate(se) for p in self.parts)
        raise ValueError(f"bad condition kind {self.kind!r}")

    def features(self) -> Iterator[str]:
        if self.kind == "feature":
            yield self.name
        for p in self.parts:
            yield from p.features()

    # -- serialization ------------------------------------------------------

    @staticmethod
    def from_json(doc) -> "Cond":
        if doc is True:
            return Cond.TRUE
        if isinstance(doc, str):
            return Cond.feature(doc)
        if isinstance(doc, dict):
            if "and" in doc:
                return Cond.all_of(*(Cond.from_json(p) for p in doc["and"]))
            if "or" in doc:
                return Cond.any_of(*(Cond.from_json(p) for p in doc["or"]))
        raise LatticeError("BAD-CONDITION", f"cannot read entry condition {doc!r}")

    def to_json(self):
        if self.kind == "true":
            return True
        if self.kind == "feature":
            return self.name
        return {self.kind: [p.to_json() for p in self.parts]}

    def __str__(self) -> str:
        if self.kind == "true":
            return "TRUE"
        if self.kind == "feature":
            return self.name
        sep = " & " if self.kind == "and" else " | "
        inner = sep.join(
            f"({p})" if p.kind in ("and", "or") else str(p) for p in self.parts
        )
        return inner

    # -- normalization ------------------------------------------------------

    def disjunctive_terms(self) -> list[frozenset[str]]:
        """Expand to a list of conjunctions of feature names (DNF)."""
        if self.kind == "true":
            return [frozenset()]
        if self.kind == "feature":
            return [frozenset([self.name])]
        if self.kind == "or":
            terms: list[frozenset[str]] = []
            for p in self.parts:
                terms.extend(p.disjunctive_terms())
            return terms
        # AND: cross product of the parts' terms
        terms = [frozenset()]
        for p in self.parts:
            terms = [a | b for a, b in itertools.product(terms, p.disjunctive_terms())]
        return terms

    def normalized(self) -> "Cond":
        """Canonical disjunction-of-conjunctions with sorted operands."""
        terms = sorted(set(self.disjunctive_terms()), key=lambda t: sorted(t))
        if terms == [frozenset()]:
            return Cond.TRUE
        conjuncts = []
        for term in terms:
            names = sorted(term)
            if len(names) == 1:
                conjuncts.append(Cond.feature(names[0]))
            else:
                conjuncts.append(Cond.all_of(*(Cond.feature(n) for n in names)))
        if len(conjuncts) == 1:
            return conjuncts[0]
        return Cond.any_of(*conjuncts)


Cond.TRUE = Cond("true")


# ---------------------------------------------------------------------------
# Realization statements


@dataclass(frozen=True)
class Realization:
    """One structural constraint attached to a feature.

    The meaning of the fields depends on ``op``:

    - insert / order-at-front / order-at-end: ``function``
    - conflate: ``function`` merged with ``partner``
    - order: ``function`` precedes ``partner``
    - preselect: ``function`` plus ``features`` for its sub-unit
    - classify / outclassify: ``function`` plus ``klass``
    - lexify: ``function`` plus ``lexeme``
    """

    op: str
    function: str
    partner: Optional[str] = None
    features: tuple[str, ...] = ()
    klass: Optional[str] = None
    lexeme: Optional[str] = None
    id: str = ""

    @staticmethod
    def from_json(doc: dict, id: str = "") -> "Realization":
        op = doc.get("op")
        if op not in OPERATORS:
            raise LatticeError("BAD-REALIZATION", f"unknown operator {op!r}")
        partner = doc.get("with") or doc.get("after")
        function = doc.get("function") or doc.get("before")
        if not function:
            raise LatticeError("BAD-REALIZATION", f"missing function in {doc!r}")
        return Realization(
            op=op,
            function=function,
            partner=partner,
            features=tuple(doc.get("features", ())),
            klass=doc.get("class"),
            lexeme=doc.get("lexeme"),
            id=id,
        )

    def to_json(self) -> dict:
        doc: dict = {"op": self.op}
        if self.op == "order":
            doc["before"] = self.function
            doc["after"] = self.partner
        else:
            doc["function"] = self.function
            if self.op == "conflate":
                doc["with"] = self.partner
        if self.op == "preselect":
            doc["features"] = list(self.features)
        if self.klass is not None:
            doc["class"] = self.klass
        if self.lexeme is not None:
            doc["lexeme"] = self.lexeme
        return doc

    def functions(self) -> tuple[str, ...]:
        if self.partner is not None:
            return (self.function, self.partner)
        return (self.function,)

    def __str__(self) -> str:
        extra = ""
        if self.op == "order":
            return f"order({self.function} < {self.partner})"
        if self.op == "conflate":
            extra = f", {self.partner}"
        elif self.op == "preselect":
            extra = ", " + " ".join(self.features)
        elif self.op in ("classify", "outclassify"):
            extra = f", {self.klass}"
        elif self.op == "lexify":
            extra = f", {self.lexeme}"
        return f"{self.op}({self.function}{extra})"


# ---------------------------------------------------------------------------
# Systems and lexemes


@dataclass(frozen=True)
class Output:
    """One alternative of a system: a feature plus its realizations."""

    feature: str
    realizations: tuple[Realization, ...] = ()
    languages: frozenset[str] = frozenset()


@dataclass(frozen=True)
class System:
    name: str
    entry: Cond
    outputs: tuple[Output, ...]
    region: str = ""
    languages: frozenset[str] = frozenset()
    chooser: Optional[str] = None

    def output_features(self) -> tuple[str, ...]:
        return tuple(o.feature for o in self.outputs)

    def output(self, feature: str) -> Output:
        for o in self.outputs:
            if o.feature == feature:
                return o
        raise LatticeError("UNKNOWN-FEATURE", f"{feature} not an output of {self.name}")


@dataclass(frozen=True)
class Lexeme:
    name: str
    spelling: str
    classes: frozenset[str] = frozenset()
    # morphological feature set -> surface string; frozenset() is the base form
    forms: tuple[tuple[frozenset[str], str], ...] = ()
    languages: frozenset[str] = frozenset()

    def form_map(self) -> dict[frozenset[str], str]:
        return dict(self.forms)


# ---------------------------------------------------------------------------
# Validation report


@dataclass
class ValidationReport:
    errors: list[tuple[str, str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str, str]] = field(default_factory=list)

    def error(self, code: str, obj: str, message: str) -> None:
        self.errors.append((code, obj, message))

    def warn(self, code: str, obj: str, message: str) -> None:
        self.warnings.append((code, obj, message))

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_json(self) -> dict:
        return {
            "errors": [
                {"code": c, "object": o, "message": m} for c, o, m in self.errors
            ],
            "warnings": [
                {"code": c, "object": o, "message": m} for c, o, m in self.warnings
            ],
        }


# ---------------------------------------------------------------------------
# The network


class SystemNetwork:
    """An immutable single-language view of the type lattice.

    Derived structure is computed once at construction: feature ownership,
    the feature dependency graph, and a deterministic total order over
    systems (dependency-topological, ties broken by system name).
    """

    def __init__(self, systems: Iterable[System], root_feature: str, language: str = ""):
        self.systems: tuple[System, ...] = tuple(systems)
        self.root_feature = root_feature
        self.language = language
        self.by_name: dict[str, System] = {s.name: s for s in self.systems}
        self.feature_owner: dict[str, System] = {}
        for s in self.systems:
            for o in s.outputs:
                self.feature_owner.setdefault(o.feature, s)
        # dependency: feature f -> features in the entry condition of f's system
        self.dependency: dict[str, set[str]] = {}
        for s in self.systems:
            entry_feats = set(s.entry.features())
            for o in s.outputs:
                self.dependency[o.feature] = set(entry_feats)
        self._topo_index = self._system_order()

    # -- ordering -----------------------------------------------------------

    def _system_order(self) -> dict[str, int]:
        """Kahn's algorithm over system-level dependencies, always taking the
        lexicographically smallest available system.  Cycles get indices after
        all sortable systems (validation reports them separately)."""
        deps: dict[str, set[str]] = {}
        for s in self.systems:
            wanted = set()
            for f in s.entry.features():
                owner = self.feature_owner.get(f)
                if owner is not None and owner.name != s.name:
                    wanted.add(owner.name)
            deps[s.name] = wanted
        order: dict[str, int] = {}
        remaining = set(deps)
        index = 0
        while remaining:
            ready = sorted(n for n in remaining if not (deps[n] & remaining))
            if not ready:  # cycle: assign rest in name order
                for n in sorted(remaining):
                    order[n] = index
                    index += 1
                break
            for n in ready:
                order[n] = index
                index += 1
            remaining -= set(ready)
        return order

    def system_index(self, name: str) -> int:
        return self._topo_index.get(name, len(self._topo_index))

    # -- queries ------------------------------------------------------------

    def entered_systems(
        self, selected: Iterable[str], fired: Iterable[str] = ()
    ) -> list[System]:
        """Systems whose entry condition is satisfied by ``selected`` and that
        have not fired yet, in deterministic traversal order.

        An empty selection enters nothing: traversal has not started, so even
        constant-TRUE (root) systems stay dormant.
        """
        se = frozenset(selected)
        if not se:
            return []
        done = set(fired)
        hits = [
            s
            for s in self.systems
            if s.name not in done and s.entry.evaluate(se)
        ]
        hits.sort(key=lambda s: (self.system_index(s.name), s.name))
        return hits

    def paradigmatic_context(self, system: str) -> Cond:
        """Where in the lattice a system is situated: its entry condition in
        canonical disjunction-of-conjunctions form."""
        if system not in self.by_name:
            raise LatticeError("UNKNOWN-SYSTEM", system)
        return self.by_name[system].entry.normalized()

    def neighbours(self, system: str) -> set[str]:
        """Systems one dependency hop away (either direction)."""
        s = self.by_name[system]
        out: set[str] = set()
        for f in s.entry.features():
            owner = self.feature_owner.get(f)
            if owner and owner.name != system:
                out.add(owner.name)
        mine = set(s.output_features())
        for other in self.systems:
            if other.name == system:
                continue
            if mine & set(other.entry.features()):
                out.add(other.name)
        return out

    def lattice_subgraph(self, focus: str, radius: int) -> "NetworkFragment":
        """All systems within ``radius`` dependency hops of the focus feature
        or system.  ``INFINITE_RADIUS`` takes the whole connected component."""
        if focus in self.by_name:
            start = focus
        elif focus in self.feature_owner:
            start = self.feature_owner[focus].name
        else:
            raise LatticeError("UNKNOWN-FOCUS", focus)
        seen = {start}
        frontier = [start]
        hops = 0
        while frontier and (radius == INFINITE_RADIUS or hops < radius):
            nxt = []
            for name in frontier:
                for n in self.neighbours(name):
                    if n not in seen:
                        seen.add(n)
                        nxt.append(n)
            frontier = nxt
            hops += 1
        return self.fragment(seen)

    def fragment(self, system_names: Iterable[str]) -> "NetworkFragment":
        names = set(system_names)
        included = [s for s in self.systems if s.name in names]
        included.sort(key=lambda s: (self.system_index(s.name), s.name))
        internal_feats = {f for s in included for f in s.output_features()}
        stubs: list[ExternalPointer] = []
        seen_stub: set[tuple[str, str]] = set()
        for s in included:
            refs = list(s.entry.features())
            for o in s.outputs:
                for r in o.realizations:
                    if r.op == "preselect":
                        refs.extend(r.features)
            for f in refs:
                if f in internal_feats or f == self.root_feature:
                    continue
                owner = self.feature_owner.get(f)
                key = (s.name, f)
                if key in seen_stub:
                    continue
                seen_stub.add(key)
                stubs.append(
                    ExternalPointer(
                        from_system=s.name,
                        feature=f,
                        owner_system=owner.name if owner else "",
                        owner_region=owner.region if owner else "",
                    )
                )
        return NetworkFragment(systems=tuple(included), boundary=tuple(stubs))


@dataclass(frozen=True)
class ExternalPointer:
    """Boundary stub: a reference from an included system to a feature owned
    outside the fragment."""

    from_system: str
    feature: str
    owner_system: str
    owner_region: str


@dataclass(frozen=True)
class NetworkFragment:
    systems: tuple[System, ...]
    boundary: tuple[ExternalPointer, ...]

    def system_names(self) -> list[str]:
        return [s.name for s in self.systems]

    def to_json(self) -> dict:
        return {
            "systems": [
                {
                    "name": s.name,
                    "region": s.region,
                    "entry": s.entry.to_json(),
                    "outputs": [o.feature for o in s.outputs],
                }
                for s in self.systems
            ],
            "boundary": [
                {
                    "from": p.from_system,
                    "feature": p.feature,
                    "owner-system": p.owner_system,
                    "owner-region": p.owner_region,
                }
                for p in self.boundary
            ],
        }


# ---------------------------------------------------------------------------
# Static validation


def validate_network(
    net: SystemNetwork,
    lexicon: Iterable[Lexeme] = (),
    choosers: Optional[dict] = None,
) -> ValidationReport:
    """Check every static invariant; all problems become report rows.

    ``choosers`` (name -> Chooser, optional) lets callers include the
    chooser-side checks that need the network for context.
    """
    report = ValidationReport()
    lexemes = {lx.name: lx for lx in lexicon}

    # unique feature names, nonempty and distinct outputs
    owners: dict[str, str] = {}
    for s in net.systems:
        if not s.outputs:
            report.error("EMPTY-SYSTEM", s.name, "system has no outputs")
        feats = [o.feature for o in s.outputs]
        if len(set(feats)) != len(feats):
            report.error("DUPLICATE-OUTPUT", s.name, "output features not distinct")
        for f in feats:
            if f in owners:
                report.error(
                    "DUPLICATE-FEATURE",
                    f,
                    f"feature owned by both {owners[f]} and {s.name}",
                )
            else:
                owners[f] = s.name
        for o in s.outputs:
            if o.languages and not o.languages <= s.languages:
                report.error(
                    "LANGUAGE-MISMATCH",
                    f"{s.name}/{o.feature}",
                    "output language set exceeds its system's",
                )
        if not s.region:
            report.error("MISSING-REGION-TAG", s.name, "system has no region")

    if net.root_feature in owners:
        report.warn(
            "ROOT-OWNED",
            net.root_feature,
            "root feature is also a system output",
        )

    known = set(owners) | {net.root_feature}

    # references resolve
    statement_ids: set[str] = set()
    for s in net.systems:
        for f in s.entry.features():
            if f not in known:
                report.error(
                    "DANGLING-REF", s.name, f"entry references unknown feature {f}"
                )
        for o in s.outputs:
            for r in o.realizations:
                if r.id:
                    if r.id in statement_ids:
                        report.error(
                            "DUPLICATE-STATEMENT-ID", r.id, "statement id reused"
                        )
                    statement_ids.add(r.id)
                if r.op == "preselect":
                    for f in r.features:
                        if f not in known:
                            report.error(
                                "DANGLING-REF",
                                f"{s.name}/{o.feature}",
                                f"preselect targets unknown feature {f}",
                            )
                if r.op == "lexify" and lexemes and r.lexeme not in lexemes:
                    report.error(
                        "DANGLING-REF",
                        f"{s.name}/{o.feature}",
                        f"lexify targets unknown lexeme {r.lexeme}",
                    )

    # acyclicity of the system dependency graph
    cycle = _find_dependency_cycle(net)
    if cycle:
        report.error("CYCLE", " -> ".join(cycle), "entry-condition dependency cycle")

    # at most one constant-TRUE (root) system; an empty network has no root
    roots = [s.name for s in net.systems if s.entry.kind == "true"]
    if not net.systems:
        report.error("NO-ROOT", net.root_feature, "network has no systems")
    elif not roots:
        report.warn("NO-ROOT", net.root_feature, "no system with constant-TRUE entry")
    if len(roots) > 1:
        report.error("MULTIPLE-ROOTS", ", ".join(sorted(roots)), ">1 TRUE-entry system")

    # connectivity: every feature reachable for at least one assignment.
    # Monotone conditions make the optimistic closure exact: start from the
    # root feature and repeatedly fire every entered system, taking all
    # outputs at once.
    if not cycle and net.systems:
        reachable = {net.root_feature}
        fired: set[str] = set()
        while True:
            entered = net.entered_systems(reachable, fired)
            if not entered:
                break
            for s in entered:
                fired.add(s.name)
                reachable.update(s.output_features())
        for f in sorted(known - reachable):
            report.error("UNREACHABLE", f, "feature not reachable from root")

    # lexeme invariants
    for lx in lexemes.values():
        if frozenset() not in dict(lx.forms):
            report.error("NO-BASE-FORM", lx.name, "lexeme lacks a base form")

    # chooser-side checks (delegated, needs both worlds)
    if choosers is not None:
        from .semantics import validate_chooser  # late import, no cycle at module load

        for s in net.systems:
            if s.chooser is None:
                continue
            ch = choosers.get(s.chooser)
            if ch is None:
                report.error(
                    "DANGLING-REF", s.name, f"references unknown chooser {s.chooser}"
                )
                continue
            validate_chooser(ch, s, report)

    return report


def _find_dependency_cycle(net: SystemNetwork) -> Optional[list[str]]:
    """Return one cycle of system names in the entry-dependency graph."""
    deps: dict[str, set[str]] = {}
    for s in net.systems:
        wanted = set()
        for f in s.entry.features():
            owner = net.feature_owner.get(f)
            if owner is not None:
                wanted.add(owner.name)
        deps[s.name] = wanted
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in deps}
    stack: list[str] = []

    def visit(n: str) -> Optional[list[str]]:
        color[n] = GREY
        stack.append(n)
        for m in sorted(deps.get(n, ())):
            if color.get(m) == GREY:
                i = stack.index(m)
                return stack[i:] + [m]
            if color.get(m) == WHITE:
                found = visit(m)
                if found:
                    return found
        stack.pop()
        color[n] = BLACK
        return None

    for n in sorted(deps):
        if color[n] == WHITE:
            found = visit(n)
            if found:
                return found
    return None


def eval_entry_condition(cond: Cond, selected: Iterable[str]) -> bool:
    return cond.evaluate(selected)
