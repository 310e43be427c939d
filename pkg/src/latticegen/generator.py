"""The generation algorithm.

One *unit cycle* traverses the lattice for one grammatical unit: while any
system's entry condition is satisfied by the growing selection expression,
resolve that system (by preselection, by its chooser, or by the first-output
default), append the chosen feature, and collect the feature's realization
statements.  Constraints are then applied to build function bundles, bundles
with preselections recurse into sub-unit cycles, leaf bundles are
lexicalized and inflected, and precedence facts are topologically sorted
into the final token order.

There is no backtracking: every fired system makes exactly one decision,
and the full decision history is kept on the result for later focusing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import LatticeError
from .network import Lexeme, Realization, System, SystemNetwork
from .semantics import (
    Chooser,
    ChooserOutcome,
    Inquiry,
    SemanticGraph,
    default_outcome,
    run_chooser,
)

MAX_UNIT_DEPTH = 32

PLACEHOLDER_OPEN = "⟨"  # ⟨
PLACEHOLDER_CLOSE = "⟩"  # ⟩

# observer event kinds, for conditional tracing
EV_SYSTEM = "system"
EV_INQUIRY = "inquiry"
EV_STATEMENT = "statement"

Observer = Callable[[str, str, dict], None]


# ---------------------------------------------------------------------------
# Records


@dataclass
class SEEntry:
    """One selection-expression slot: a feature with its provenance."""

    feature: str
    system: Optional[str]  # None for initial features not (yet) tied to a system
    source: str  # "initial" | "preselected" | "chooser" | "default"
    outcome: Optional[ChooserOutcome] = None


@dataclass
class AppliedConstraint:
    """A realization statement instance plus where it came from."""

    statement: Realization
    system: str
    feature: str

    def to_json(self) -> dict:
        return {
            "statement": self.statement.to_json(),
            "statement-id": self.statement.id,
            "system": self.system,
            "feature": self.feature,
        }


@dataclass
class UnitRecord:
    id: str
    path: str
    entity: str
    selection: list[SEEntry] = field(default_factory=list)
    constraints: list[AppliedConstraint] = field(default_factory=list)
    identifications: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    failure: Optional[str] = None

    def features(self) -> list[str]:
        return [e.feature for e in self.selection]

    def fired_systems(self) -> list[str]:
        return [e.system for e in self.selection if e.system]


@dataclass
class FunctionBundle:
    id: str
    unit: str
    functions: set[str]
    insertion_index: int
    constraints: list[AppliedConstraint] = field(default_factory=list)
    preselections: set[str] = field(default_factory=set)
    classify: set[str] = field(default_factory=set)
    outclassify: set[str] = field(default_factory=set)
    lexify: Optional[str] = None
    filler_unit: Optional[str] = None  # sub-unit id, when preselected
    token_index: Optional[int] = None  # leaf realization

    def label(self) -> str:
        return "/".join(sorted(self.functions))


@dataclass
class Token:
    text: str
    bundle: str
    unit: str
    placeholder: bool = False


@dataclass
class DecisionEvent:
    seq: int
    unit: str
    system: str
    feature: str
    path: list[tuple[str, dict[str, str], str]]
    statement_ids: list[str]

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "unit": self.unit,
            "system": self.system,
            "feature": self.feature,
            "path": [
                {"inquiry": n, "bindings": dict(b), "answer": a} for n, b, a in self.path
            ],
            "statements": list(self.statement_ids),
        }


@dataclass
class GenerationResult:
    string: str
    tokens: list[Token]
    units: dict[str, UnitRecord]
    bundles: dict[str, FunctionBundle]
    events: list[DecisionEvent]
    root_unit: str
    status: str  # "complete" | "partial"
    reason: Optional[str] = None
    chooser_invocations: int = 0
    resource_version: tuple[str, tuple[str, ...]] = ("", ())
    language: str = ""

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def unit_bundles(self, unit_id: str) -> list[FunctionBundle]:
        out = [b for b in self.bundles.values() if b.unit == unit_id]
        out.sort(key=lambda b: b.insertion_index)
        return out

    def unit_by_path(self, path: str) -> Optional[UnitRecord]:
        for u in self.units.values():
            if u.path == path:
                return u
        return None

    def structure_json(self) -> dict:
        def unit_doc(unit_id: str) -> dict:
            rec = self.units[unit_id]
            ordered = sorted(
                (b for b in self.bundles.values() if b.unit == unit_id),
                key=lambda b: (b.token_index is None, b.token_index, b.insertion_index),
            )
            children = []
            for b in ordered:
                node: dict = {"bundle": b.id, "functions": sorted(b.functions)}
                if b.filler_unit:
                    node["unit"] = unit_doc(b.filler_unit)
                elif b.token_index is not None:
                    node["token"] = self.tokens[b.token_index].text
                    node["token-index"] = b.token_index
                children.append(node)
            return {
                "unit": unit_id,
                "path": rec.path,
                "entity": rec.entity,
                "constituents": children,
            }

        return unit_doc(self.root_unit)

    def to_json(self) -> dict:
        return {
            "string": self.string,
            "status": self.status,
            "reason": self.reason,
            "language": self.language,
            "tokens": [
                {
                    "text": t.text,
                    "bundle": t.bundle,
                    "unit": t.unit,
                    "placeholder": t.placeholder,
                }
                for t in self.tokens
            ],
            "structure": self.structure_json(),
            "events": [e.to_json() for e in self.events],
            "resource-version": {
                "base": self.resource_version[0],
                "patches": list(self.resource_version[1]),
            },
        }


# ---------------------------------------------------------------------------
# Traversal


def traverse_unit(
    net: SystemNetwork,
    choosers: dict[str, Chooser],
    inquiries: dict[str, Inquiry],
    init_se: Iterable[str],
    entity: str,
    graph: SemanticGraph,
    unit_id: str = "u0",
    path: str = "/",
    on_decision: Optional[Callable[[System, ChooserOutcome], None]] = None,
    observer: Optional[Observer] = None,
    strict: bool = True,
) -> UnitRecord:
    """Run one unit cycle to its fixpoint.

    Each system fires at most once, so the loop terminates.  With
    ``strict=False`` chooser failures end the traversal and are recorded on
    the unit instead of raised.
    """
    init = list(init_se)
    if not init:
        raise LatticeError("EMPTY-INIT", "unit cycle needs at least one seed feature")
    record = UnitRecord(id=unit_id, path=path, entity=entity)
    for f in init:
        record.selection.append(SEEntry(feature=f, system=None, source="initial"))
    selected = set(init)
    fired: set[str] = set()
    try:
        while True:
            entered = net.entered_systems(selected, fired)
            if not entered:
                break
            for system in entered:
                outcome, source = _resolve_system(
                    system, selected, choosers, inquiries, entity, graph, observer
                )
                fired.add(system.name)
                _record_choice(record, system, outcome, source, selected)
                if on_decision is not None:
                    on_decision(system, outcome)
    except LatticeError as exc:
        if strict:
            raise
        record.failure = exc.code
        record.warnings.append(str(exc))
    return record


def _resolve_system(
    system: System,
    selected: set[str],
    choosers: dict[str, Chooser],
    inquiries: dict[str, Inquiry],
    entity: str,
    graph: SemanticGraph,
    observer: Optional[Observer],
) -> tuple[ChooserOutcome, str]:
    already = [f for f in system.output_features() if f in selected]
    if len(already) > 1:
        raise LatticeError(
            "CONTRADICTORY-PRESELECTION",
            f"{system.name}: {', '.join(sorted(already))} all preselected",
        )
    if len(already) == 1:
        return ChooserOutcome(feature=already[0]), "preselected"
    chooser = choosers.get(system.chooser) if system.chooser else None
    if chooser is None:
        return default_outcome(system), "default"

    def on_inquiry(name: str, answer: str) -> None:
        if observer is not None:
            observer(EV_INQUIRY, name, {"answer": answer, "system": system.name})

    outcome = run_chooser(
        chooser, system, entity, graph, inquiries, on_inquiry=on_inquiry
    )
    return outcome, "chooser"


def _record_choice(
    record: UnitRecord,
    system: System,
    outcome: ChooserOutcome,
    source: str,
    selected: set[str],
) -> None:
    if source == "preselected":
        # upgrade the existing initial entry instead of duplicating the feature
        for entry in record.selection:
            if entry.feature == outcome.feature and entry.system is None:
                entry.system = system.name
                entry.source = "preselected"
                entry.outcome = outcome
                break
        else:
            record.selection.append(
                SEEntry(outcome.feature, system.name, "preselected", outcome)
            )
    else:
        record.selection.append(SEEntry(outcome.feature, system.name, source, outcome))
    selected.add(outcome.feature)
    for fn, eid in outcome.identifications:
        record.identifications.setdefault(fn, eid)
    for constraint in system.output(outcome.feature).realizations:
        record.constraints.append(
            AppliedConstraint(constraint, system.name, outcome.feature)
        )


# ---------------------------------------------------------------------------
# Realization application


@dataclass
class PrecedenceFact:
    before: str  # bundle id
    after: str
    constraint: AppliedConstraint


@dataclass
class RealizedUnit:
    bundles: list[FunctionBundle]
    facts: list[PrecedenceFact]
    fronts: list[tuple[str, AppliedConstraint]]  # bundle id ordered before all
    ends: list[tuple[str, AppliedConstraint]]
    warnings: list[str] = field(default_factory=list)

    def bundle_of(self, function: str) -> Optional[FunctionBundle]:
        for b in self.bundles:
            if function in b.functions:
                return b
        return None


def apply_realizations(
    record: UnitRecord, bundle_prefix: str = "b", observer: Optional[Observer] = None
) -> RealizedUnit:
    """Build function bundles and precedence facts from a unit's constraints.

    Inserts create bundles; conflates merge them (union of functions, union
    of constraints); ordering statements become precedence facts; the rest
    attach to their bundle.  Every applied statement keeps its
    (system, feature, statement id) provenance.
    """
    unit = RealizedUnit(bundles=[], facts=[], fronts=[], ends=[])
    by_function: dict[str, FunctionBundle] = {}
    counter = 0

    def note(c: AppliedConstraint) -> None:
        if observer is not None:
            observer(
                EV_STATEMENT,
                c.statement.id,
                {"system": c.system, "feature": c.feature, "unit": record.id},
            )

    # pass 1: inserts
    for c in record.constraints:
        if c.statement.op != "insert":
            continue
        fn = c.statement.function
        if fn in by_function:
            unit.warnings.append(f"duplicate insert of {fn} ignored")
            continue
        bundle = FunctionBundle(
            id=f"{bundle_prefix}{counter}",
            unit=record.id,
            functions={fn},
            insertion_index=counter,
        )
        counter += 1
        bundle.constraints.append(c)
        by_function[fn] = bundle
        unit.bundles.append(bundle)
        note(c)

    # pass 2: conflates
    for c in record.constraints:
        if c.statement.op != "conflate":
            continue
        a, b = c.statement.function, c.statement.partner
        missing = [fn for fn in (a, b) if fn not in by_function]
        if missing:
            raise LatticeError(
                "CONFLATE-UNKNOWN-FUNCTION",
                f"{record.id}: conflate({a}, {b}) with uninserted {', '.join(missing)}",
            )
        keep, drop = by_function[a], by_function[b]
        if keep is not drop:
            if drop.insertion_index < keep.insertion_index:
                keep, drop = drop, keep
            keep.functions |= drop.functions
            keep.constraints.extend(drop.constraints)
            unit.bundles.remove(drop)
            for fn in drop.functions:
                by_function[fn] = keep
        keep.constraints.append(c)
        note(c)

    # pass 3: everything else, in source order
    for c in record.constraints:
        op = c.statement.op
        if op in ("insert", "conflate"):
            continue
        stmt = c.statement
        if op == "order":
            ba = by_function.get(stmt.function)
            bb = by_function.get(stmt.partner)
            if ba is None or bb is None:
                unit.warnings.append(f"order over uninserted function: {stmt}")
                continue
            if ba is bb:
                unit.warnings.append(f"order within one bundle ignored: {stmt}")
                continue
            unit.facts.append(PrecedenceFact(ba.id, bb.id, c))
            ba.constraints.append(c)
            bb.constraints.append(c)
        else:
            bundle = by_function.get(stmt.function)
            if bundle is None:
                unit.warnings.append(f"statement over uninserted function: {stmt}")
                continue
            bundle.constraints.append(c)
            if op == "order-at-front":
                unit.fronts.append((bundle.id, c))
            elif op == "order-at-end":
                unit.ends.append((bundle.id, c))
            elif op == "preselect":
                bundle.preselections.update(stmt.features)
            elif op == "classify":
                bundle.classify.add(stmt.klass)
            elif op == "outclassify":
                bundle.outclassify.add(stmt.klass)
            elif op == "lexify":
                bundle.lexify = stmt.lexeme
        note(c)

    return unit


# ---------------------------------------------------------------------------
# Linearization


def linearize(realized: RealizedUnit) -> list[str]:
    """Topological order over the precedence facts; at-front/at-end compile
    to edges against all other bundles; ties go to insertion order."""
    ids = [b.id for b in sorted(realized.bundles, key=lambda b: b.insertion_index)]
    index = {bid: i for i, bid in enumerate(ids)}
    edges: dict[str, set[str]] = {bid: set() for bid in ids}
    for fact in realized.facts:
        edges[fact.before].add(fact.after)
    for bid, _ in realized.fronts:
        for other in ids:
            if other != bid:
                edges[bid].add(other)
    for bid, _ in realized.ends:
        for other in ids:
            if other != bid:
                edges[other].add(bid)
    incoming: dict[str, int] = {bid: 0 for bid in ids}
    for src, dsts in edges.items():
        for dst in dsts:
            incoming[dst] += 1
    order: list[str] = []
    ready = sorted((bid for bid in ids if incoming[bid] == 0), key=index.get)
    while ready:
        nxt = ready.pop(0)
        order.append(nxt)
        for dst in sorted(edges[nxt], key=index.get):
            incoming[dst] -= 1
            if incoming[dst] == 0:
                ready.append(dst)
        ready.sort(key=index.get)
    if len(order) != len(ids):
        cycle = _minimal_cycle(edges, set(ids) - set(order))
        labels = {b.id: b.label() for b in realized.bundles}
        raise LatticeError(
            "ORDER-CYCLE",
            "{" + ", ".join(sorted(labels[b] for b in cycle)) + "}",
        )
    return order


def _minimal_cycle(edges: dict[str, set[str]], remaining: set[str]) -> set[str]:
    """Shortest cycle among the unsortable bundles (BFS from each node)."""
    best: Optional[list[str]] = None
    for start in sorted(remaining):
        # BFS back to start
        queue = [(start, [start])]
        seen = {start}
        while queue:
            node, trail = queue.pop(0)
            for nxt in sorted(edges.get(node, ()) & remaining):
                if nxt == start:
                    if best is None or len(trail) < len(best):
                        best = trail
                    queue = []
                    break
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, trail + [nxt]))
    return set(best or remaining)


# ---------------------------------------------------------------------------
# Lexical selection and morphology


def select_lexeme(
    lexicon: dict[str, Lexeme],
    classify: Iterable[str],
    outclassify: Iterable[str] = (),
    lexify: Optional[str] = None,
    preference: Optional[str] = None,
) -> Lexeme:
    """Pick the lexeme for one bundle.

    Lexify wins outright.  Otherwise candidates must carry every classify
    class and none of the outclassify classes; an entity-type preference
    filters first, remaining ties break lexicographically by name.
    """
    if lexify is not None:
        lx = lexicon.get(lexify)
        if lx is None:
            raise LatticeError("NO-CANDIDATE", f"lexify target {lexify} not in lexicon")
        return lx
    wanted = set(classify)
    barred = set(outclassify)
    if not wanted:
        raise LatticeError("NO-CANDIDATE", "no lexical classes constrained")
    candidates = [
        lx
        for lx in lexicon.values()
        if wanted <= lx.classes and not (barred & lx.classes)
    ]
    if not candidates:
        raise LatticeError(
            "NO-CANDIDATE", f"no lexeme with classes {sorted(wanted)}"
        )
    if preference is not None:
        preferred = [lx for lx in candidates if lx.name == preference]
        if preferred:
            candidates = preferred
    return min(candidates, key=lambda lx: lx.name)


def inflect(lexeme: Lexeme, morph: Iterable[str]) -> str:
    """Exact-match lookup by the largest feature subset; base form fallback."""
    have = frozenset(morph)
    best_key: frozenset[str] = frozenset()
    best = None
    for key, form in lexeme.forms:
        if key <= have and (best is None or len(key) > len(best_key)):
            best_key, best = key, form
    if best is not None:
        return best
    return lexeme.spelling


# ---------------------------------------------------------------------------
# Full generation


class _GenState:
    def __init__(self) -> None:
        self.units: dict[str, UnitRecord] = {}
        self.bundles: dict[str, FunctionBundle] = {}
        self.tokens: list[Token] = []
        self.events: list[DecisionEvent] = []
        self.invocations = 0
        self.status = "complete"
        self.reason: Optional[str] = None
        self.unit_counter = 0
        self.bundle_counter = 0

    def partial(self, reason: str) -> None:
        self.status = "partial"
        if self.reason is None:
            self.reason = reason


def generate(
    resources,
    graph: SemanticGraph,
    language: str,
    observer: Optional[Observer] = None,
) -> GenerationResult:
    """Generate a surface string for ``graph`` in ``language``.

    Never raises for resource gaps: failures degrade to a partial result
    carrying the furthest structure reached and a reason code.
    """
    net = resources.network(language)
    lexicon = resources.lexicon(language)
    choosers = resources.choosers(language)
    inquiries = resources.inquiries(language)
    morphology = resources.morphology(language)
    punctuation = resources.punctuation(language)
    state = _GenState()

    def gen_unit(init_se: list[str], entity: str, path: str, depth: int) -> str:
        unit_id = f"u{state.unit_counter}"
        state.unit_counter += 1
        if depth > MAX_UNIT_DEPTH:
            record = UnitRecord(id=unit_id, path=path, entity=entity)
            record.failure = "RECURSION-LIMIT"
            state.units[unit_id] = record
            state.partial("RECURSION-LIMIT")
            return unit_id

        def on_decision(system: System, outcome: ChooserOutcome) -> None:
            state.invocations += 1
            statement_ids = [
                r.id for r in system.output(outcome.feature).realizations
            ]
            event = DecisionEvent(
                seq=len(state.events),
                unit=unit_id,
                system=system.name,
                feature=outcome.feature,
                path=list(outcome.path),
                statement_ids=statement_ids,
            )
            state.events.append(event)
            if observer is not None:
                observer(
                    EV_SYSTEM,
                    system.name,
                    {"unit": unit_id, "feature": outcome.feature, "seq": event.seq},
                )

        record = traverse_unit(
            net,
            choosers,
            inquiries,
            init_se,
            entity,
            graph,
            unit_id=unit_id,
            path=path,
            on_decision=on_decision,
            observer=observer,
            strict=False,
        )
        state.units[unit_id] = record
        if record.failure:
            state.partial(record.failure)

        try:
            realized = apply_realizations(
                record, bundle_prefix=f"{unit_id}.b", observer=observer
            )
        except LatticeError as exc:
            state.partial(exc.code)
            record.warnings.append(str(exc))
            return unit_id
        record.warnings.extend(realized.warnings)
        for b in realized.bundles:
            state.bundles[b.id] = b
        try:
            order = linearize(realized)
        except LatticeError as exc:
            state.partial(exc.code)
            record.warnings.append(str(exc))
            order = [b.id for b in realized.bundles]

        for bid in order:
            bundle = state.bundles[bid]
            if bundle.preselections:
                sub_entity = entity
                identified = False
                for fn in sorted(bundle.functions):
                    if fn in record.identifications:
                        sub_entity = record.identifications[fn]
                        identified = True
                        break
                if not identified:
                    record.warnings.append(
                        f"{bundle.label()}: no identification, using unit entity"
                    )
                bundle.filler_unit = gen_unit(
                    sorted(bundle.preselections),
                    sub_entity,
                    f"{path.rstrip('/')}/{bundle.label()}",
                    depth + 1,
                )
            else:
                _lexicalize(state, record, bundle, lexicon, morphology, graph)
        return unit_id

    root_unit = gen_unit([net.root_feature], graph.root, "/", 0)

    # surface assembly: spaces, initial capital, terminal punctuation
    words = [t.text for t in state.tokens]
    if words:
        words[0] = words[0][:1].upper() + words[0][1:]
        state.tokens[0].text = words[0]
    mark = "."
    root_record = state.units[root_unit]
    for entry in root_record.selection:
        if entry.feature in punctuation:
            mark = punctuation[entry.feature]
            break
    string = " ".join(words) + mark if words else ""

    result = GenerationResult(
        string=string,
        tokens=state.tokens,
        units=state.units,
        bundles=state.bundles,
        events=state.events,
        root_unit=root_unit,
        status=state.status,
        reason=state.reason,
        chooser_invocations=state.invocations,
        resource_version=getattr(resources, "version", ("", ())),
        language=language,
    )
    fired = sum(len(u.fired_systems()) for u in state.units.values())
    assert result.chooser_invocations == fired, "backtracking detected"
    assert len(result.events) == fired
    return result


def _lexicalize(
    state: _GenState,
    record: UnitRecord,
    bundle: FunctionBundle,
    lexicon: dict[str, Lexeme],
    morphology: dict[str, tuple[str, frozenset[str]]],
    graph: SemanticGraph,
) -> None:
    entity_id = None
    for fn in sorted(bundle.functions):
        if fn in record.identifications:
            entity_id = record.identifications[fn]
            break
    if entity_id is None:
        entity_id = record.entity
    # the lexical preference is the identified entity's semantic type
    try:
        entity_type = graph.entity(entity_id).type
    except LatticeError:
        entity_type = None
    try:
        lexeme = select_lexeme(
            lexicon,
            bundle.classify,
            bundle.outclassify,
            bundle.lexify,
            preference=entity_type,
        )
    except LatticeError as exc:
        state.partial(exc.code)
        record.warnings.append(f"{bundle.label()}: {exc}")
        token = Token(
            text=f"{PLACEHOLDER_OPEN}{bundle.label()}{PLACEHOLDER_CLOSE}",
            bundle=bundle.id,
            unit=record.id,
            placeholder=True,
        )
        bundle.token_index = len(state.tokens)
        state.tokens.append(token)
        return
    morph: set[str] = set()
    for entry in record.selection:
        mapping = morphology.get(entry.feature)
        if mapping and mapping[0] in bundle.functions:
            morph.update(mapping[1])
    text = inflect(lexeme, morph)
    bundle.token_index = len(state.tokens)
    state.tokens.append(Token(text=text, bundle=bundle.id, unit=record.id))
