"""Versioned resource bundles and their canonical on-disk form.

A resource file is a JSON document with top-level keys ``systems``,
``lexemes``, ``choosers``, ``inquiries``, ``regions``, ``language-codes``
(plus ``root-feature``, ``morphology`` and ``punctuation``, which the
generator needs).  Every object carries an explicit ``languages`` array in
canonical form; an omitted array on load means "all declared languages".

Canonical serialization is deterministic (keys sorted, two-space indent,
objects ordered by name then language set) so that resource round-trips can
be compared byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .errors import LatticeError
from .network import (
    Cond,
    Lexeme,
    Output,
    Realization,
    System,
    SystemNetwork,
    ValidationReport,
    validate_network,
)
from .semantics import Chooser, Inquiry, validate_chooser_answers

KINDS = ("system", "lexeme", "chooser", "inquiry", "morphology", "punctuation")
# kinds that count as "objects" for sharing statistics
COUNTED_KINDS = ("system", "lexeme", "chooser", "inquiry")

_KIND_KEY = {
    "system": "systems",
    "lexeme": "lexemes",
    "chooser": "choosers",
    "inquiry": "inquiries",
    "morphology": "morphology",
    "punctuation": "punctuation",
}
_KEY_KIND = {v: k for k, v in _KIND_KEY.items()}


class ValidationFailed(LatticeError):
    def __init__(self, report: ValidationReport):
        first = report.errors[0] if report.errors else ("?", "?", "?")
        super().__init__(
            "VALIDATION-FAILED",
            f"{len(report.errors)} error(s), first: {' '.join(first)}",
        )
        self.report = report


def canonical_text(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def content_hash(doc) -> str:
    return hashlib.sha256(canonical_text(doc).encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class RObj:
    """One named, language-conditionalized resource object.

    ``content`` is the canonical JSON body *without* the languages array;
    two objects unify under merge iff kind, name and content all agree.
    """

    kind: str
    name: str
    content: dict
    languages: frozenset[str]

    def content_key(self) -> str:
        return content_hash(self.content)

    def to_json(self) -> dict:
        doc = dict(self.content)
        doc["languages"] = sorted(self.languages)
        return doc


@dataclass(frozen=True)
class ResourceSet:
    """Immutable bundle of network + choosers + inquiries + lexicon plus the
    version lineage (base content hash and applied patch ids)."""

    languages: frozenset[str]
    root_feature: str
    objects: tuple[RObj, ...]
    base_version: str = ""
    patch_ids: tuple[str, ...] = ()

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_json(doc: dict) -> "ResourceSet":
        languages = frozenset(doc.get("language-codes", ()))
        if not languages:
            raise LatticeError("BAD-RESOURCE", "no language-codes declared")
        root = doc.get("root-feature", "start")
        objects: list[RObj] = []
        for key, kind in _KEY_KIND.items():
            for entry in doc.get(key, ()):
                entry = dict(entry)
                langs = frozenset(entry.pop("languages", ())) or languages
                name = entry.get("name") or entry.get("feature")
                if not name:
                    raise LatticeError("BAD-RESOURCE", f"{kind} object without a name")
                objects.append(
                    RObj(kind=kind, name=name, content=entry, languages=langs)
                )
        rs = ResourceSet(languages=languages, root_feature=root, objects=tuple(objects))
        return replace(rs, base_version=rs.content_hash())

    def to_json(self) -> dict:
        doc: dict = {
            "language-codes": sorted(self.languages),
            "root-feature": self.root_feature,
            "regions": sorted(
                {
                    o.content.get("region", "")
                    for o in self.objects
                    if o.kind == "system" and o.content.get("region")
                }
            ),
        }
        for kind, key in _KIND_KEY.items():
            doc[key] = [
                o.to_json()
                for o in sorted(
                    (o for o in self.objects if o.kind == kind),
                    key=lambda o: (o.name, sorted(o.languages)),
                )
            ]
        return doc

    def canonical_text(self) -> str:
        return canonical_text(self.to_json())

    def content_hash(self) -> str:
        return content_hash(self.to_json())

    @property
    def version(self) -> tuple[str, tuple[str, ...]]:
        return (self.base_version, self.patch_ids)

    # -- object access ------------------------------------------------------

    def of_kind(self, kind: str, language: Optional[str] = None) -> list[RObj]:
        out = [o for o in self.objects if o.kind == kind]
        if language is not None:
            out = [o for o in out if language in o.languages]
        return sorted(out, key=lambda o: (o.name, sorted(o.languages)))

    def find(self, kind: str, name: str) -> list[RObj]:
        return [o for o in self.objects if o.kind == kind and o.name == name]

    def counted_objects(self) -> list[RObj]:
        return [o for o in self.objects if o.kind in COUNTED_KINDS]

    def regions(self) -> list[str]:
        return sorted(
            {
                o.content.get("region", "")
                for o in self.objects
                if o.kind == "system" and o.content.get("region")
            }
        )

    # -- language views -----------------------------------------------------

    def network(self, language: str) -> SystemNetwork:
        self._check_language(language)
        systems = []
        for o in self.of_kind("system", language):
            systems.append(_system_from_content(o.content, o.languages))
        return SystemNetwork(systems, self.root_feature, language)

    def lexicon(self, language: str) -> dict[str, Lexeme]:
        self._check_language(language)
        out = {}
        for o in self.of_kind("lexeme", language):
            c = o.content
            forms = tuple(
                sorted(
                    (
                        (frozenset(k.split(",")) if k else frozenset(), v)
                        for k, v in c.get("forms", {}).items()
                    ),
                    key=lambda kv: sorted(kv[0]),
                )
            )
            out[o.name] = Lexeme(
                name=o.name,
                spelling=c.get("spelling", o.name),
                classes=frozenset(c.get("classes", ())),
                forms=forms,
                languages=o.languages,
            )
        return out

    def choosers(self, language: str) -> dict[str, Chooser]:
        self._check_language(language)
        return {
            o.name: Chooser.from_json({**o.content, "languages": sorted(o.languages)})
            for o in self.of_kind("chooser", language)
        }

    def inquiries(self, language: str) -> dict[str, Inquiry]:
        self._check_language(language)
        return {
            o.name: Inquiry.from_json(o.content, o.languages)
            for o in self.of_kind("inquiry", language)
        }

    def morphology(self, language: str) -> dict[str, tuple[str, frozenset[str]]]:
        """feature -> (function carrying the morphology, morph feature set)"""
        self._check_language(language)
        return {
            o.name: (o.content["function"], frozenset(o.content.get("morph", ())))
            for o in self.of_kind("morphology", language)
        }

    def punctuation(self, language: str) -> dict[str, str]:
        self._check_language(language)
        return {
            o.name: o.content.get("mark", ".")
            for o in self.of_kind("punctuation", language)
        }

    def _check_language(self, language: str) -> None:
        if language not in self.languages:
            raise LatticeError("UNKNOWN-LANGUAGE", language)

    # -- validation ---------------------------------------------------------

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        for lang in sorted(self.languages):
            self._validate_language(lang, report)
        return report

    def _validate_language(self, lang: str, report: ValidationReport) -> None:
        # name uniqueness per kind per language view
        for kind in KINDS:
            seen: set[str] = set()
            for o in self.of_kind(kind, lang):
                if o.name in seen:
                    report.error(
                        "DUPLICATE-NAME",
                        f"{kind} {o.name}",
                        f"duplicate {kind} in language view {lang}",
                    )
                seen.add(o.name)
        net = self.network(lang)
        lexicon = self.lexicon(lang)
        choosers = self.choosers(lang)
        inquiries = self.inquiries(lang)
        sub = validate_network(net, lexicon.values(), choosers)
        prefix = f"[{lang}] "
        report.errors.extend((c, prefix + o, m) for c, o, m in sub.errors)
        report.warnings.extend((c, prefix + o, m) for c, o, m in sub.warnings)
        for inq in inquiries.values():
            if inq.default not in inq.answers:
                report.error(
                    "BAD-DEFAULT", prefix + inq.name, "default not among answers"
                )
            for rule in inq.rules:
                if rule.answer not in inq.answers:
                    report.error(
                        "BAD-ANSWER",
                        prefix + inq.name,
                        f"rule answer {rule.answer!r} not among answers",
                    )
        for ch in choosers.values():
            sub = ValidationReport()
            validate_chooser_answers(ch, inquiries, sub)
            report.errors.extend((c, prefix + o, m) for c, o, m in sub.errors)
            report.warnings.extend((c, prefix + o, m) for c, o, m in sub.warnings)


def _system_from_content(content: dict, languages: frozenset[str]) -> System:
    outputs = []
    for out in content.get("outputs", ()):
        feature = out["feature"]
        reals = tuple(
            Realization.from_json(r, id=f"{content['name']}/{feature}/{i}")
            for i, r in enumerate(out.get("realizations", ()))
        )
        outputs.append(
            Output(
                feature=feature,
                realizations=reals,
                languages=frozenset(out.get("languages", ())) or languages,
            )
        )
    return System(
        name=content["name"],
        entry=Cond.from_json(content.get("entry", True)),
        outputs=tuple(outputs),
        region=content.get("region", ""),
        languages=languages,
        chooser=content.get("chooser"),
    )


def load_resources(paths: Iterable[str]) -> ResourceSet:
    """Load, concatenate, and validate one or more resource files."""
    paths = list(paths)
    docs = []
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                docs.append(json.load(fh))
        except FileNotFoundError:
            raise LatticeError("PARSE-ERROR", f"{path}: file not found") from None
        except json.JSONDecodeError as exc:
            raise LatticeError(
                "PARSE-ERROR", f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from None
    if not docs:
        report = ValidationReport()
        report.error("NO-ROOT", "", "no resource files given")
        raise ValidationFailed(report)
    merged: dict = {"language-codes": [], "root-feature": None}
    for key in _KEY_KIND:
        merged[key] = []
    for doc in docs:
        merged["language-codes"] = sorted(
            set(merged["language-codes"]) | set(doc.get("language-codes", ()))
        )
        root = doc.get("root-feature", "start")
        if merged["root-feature"] is None:
            merged["root-feature"] = root
        elif merged["root-feature"] != root:
            raise LatticeError("INCOMPATIBLE-SCHEMA", "root-feature differs across files")
        for key in _KEY_KIND:
            merged[key].extend(doc.get(key, ()))
    rs = ResourceSet.from_json(merged)
    report = rs.validate()
    if not report.ok:
        raise ValidationFailed(report)
    return rs


def save_resources(rs: ResourceSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rs.canonical_text())
