"""Resource lifecycle: edit accumulation, patch creation, patch acceptance.

The workspace is a single-writer value over immutable resource versions.
Edits apply to a shadow copy that is validated before it becomes visible;
a failing edit rolls back and leaves the workspace untouched.  Accumulated
edits freeze into content-hash-anchored patches (object replacements, not
text diffs), and acceptance promotes the shadow to the new base.

Accepting a patch that replaces a whole functional region is gated on a
full regression-suite pass, because a region swap is the unit of exchange
between developers; a force flag overrides the gate.
"""

from __future__ import annotations

import datetime
import json
import os
import uuid
from dataclasses import dataclass, replace
from typing import Optional

from .errors import LatticeError
from .resources import RObj, ResourceSet, ValidationFailed, content_hash
from .suite import Suite, SuiteReport, run_suite

# hash anchor used when an edit creates a brand-new object
NEW_OBJECT = "new"


@dataclass(frozen=True)
class Edit:
    """Replace (or create, or delete) one named object.

    ``after`` is the object's content without its languages array; ``None``
    deletes the object.  ``before_hash`` anchors the edit to the exact
    content it modified.
    """

    kind: str
    name: str
    after: Optional[dict]
    languages: tuple[str, ...]
    before_hash: str = NEW_OBJECT

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "before": self.before_hash,
            "after": self.after,
            "languages": list(self.languages),
        }

    @staticmethod
    def from_json(doc: dict) -> "Edit":
        return Edit(
            kind=doc["kind"],
            name=doc["name"],
            after=doc.get("after"),
            languages=tuple(doc.get("languages", ())),
            before_hash=doc.get("before", NEW_OBJECT),
        )


@dataclass
class Patch:
    id: str
    base_version: str
    edits: list[Edit]
    note: str = ""
    timestamp: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "base-version": self.base_version,
            "edits": [e.to_json() for e in self.edits],
            "note": self.note,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_json(doc: dict) -> "Patch":
        return Patch(
            id=doc["id"],
            base_version=doc.get("base-version", ""),
            edits=[Edit.from_json(e) for e in doc.get("edits", ())],
            note=doc.get("note", ""),
            timestamp=doc.get("timestamp", ""),
        )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")

    @staticmethod
    def load(path: str) -> "Patch":
        with open(path, "r", encoding="utf-8") as fh:
            return Patch.from_json(json.load(fh))

    def replaced_regions(self, base: ResourceSet) -> set[str]:
        """Regions for which this patch touches every member system."""
        touched: dict[str, set[str]] = {}
        for e in self.edits:
            if e.kind != "system":
                continue
            region = None
            for o in base.find("system", e.name):
                region = o.content.get("region")
            if region is None and e.after is not None:
                region = e.after.get("region")
            if region:
                touched.setdefault(region, set()).add(e.name)
        replaced = set()
        for region, names in touched.items():
            members = {
                o.name
                for o in base.objects
                if o.kind == "system" and o.content.get("region") == region
            }
            if members and members <= names:
                replaced.add(region)
        return replaced


def apply_edit(rs: ResourceSet, edit: Edit, check_hash: bool = True) -> ResourceSet:
    """Pure object replacement; raises STALE-PATCH when the anchor hash no
    longer matches the current content."""
    langs = frozenset(edit.languages) or rs.languages
    matches = [
        o
        for o in rs.objects
        if o.kind == edit.kind and o.name == edit.name and o.languages & langs
    ]
    if check_hash:
        if matches:
            current = matches[0].content_key()
            if edit.before_hash != current:
                raise LatticeError(
                    "STALE-PATCH",
                    f"{edit.kind} {edit.name}: expected {edit.before_hash}, "
                    f"found {current}",
                )
        elif edit.before_hash != NEW_OBJECT:
            raise LatticeError(
                "STALE-PATCH",
                f"{edit.kind} {edit.name}: anchored object no longer exists",
            )
    objects = [o for o in rs.objects if o not in matches]
    if edit.after is not None:
        objects.append(
            RObj(kind=edit.kind, name=edit.name, content=dict(edit.after), languages=langs)
        )
    return replace(rs, objects=tuple(objects))


def reverse_edit(rs: ResourceSet, edit: Edit) -> Edit:
    """The edit that undoes ``edit`` against the pre-edit state ``rs``."""
    langs = frozenset(edit.languages) or rs.languages
    matches = [
        o
        for o in rs.objects
        if o.kind == edit.kind and o.name == edit.name and o.languages & langs
    ]
    after_hash = content_hash(edit.after) if edit.after is not None else NEW_OBJECT
    if matches:
        return Edit(
            kind=edit.kind,
            name=edit.name,
            after=dict(matches[0].content),
            languages=edit.languages,
            before_hash=after_hash,
        )
    return Edit(
        kind=edit.kind,
        name=edit.name,
        after=None,
        languages=edit.languages,
        before_hash=after_hash,
    )


class Workspace:
    """Single-writer resource workspace with a validated shadow version."""

    def __init__(self, base: ResourceSet, suite: Optional[Suite] = None, directory: Optional[str] = None):
        self.base = base
        self.shadow = base
        self.pending: list[Edit] = []
        self.suite = suite
        self.directory = directory
        self.accepted_patches: list[Patch] = []

    @property
    def current(self) -> ResourceSet:
        """The resource version generation should use."""
        return self.shadow

    @property
    def dirty(self) -> bool:
        return bool(self.pending)

    def record_edit(self, edit: Edit) -> ResourceSet:
        """Apply one edit to the shadow, validating first; a validation
        failure rolls the edit back and re-raises."""
        candidate = apply_edit(self.shadow, edit, check_hash=True)
        report = candidate.validate()
        if not report.ok:
            raise ValidationFailed(report)
        self.shadow = candidate
        self.pending.append(edit)
        return self.shadow

    def anchored_edit(
        self, kind: str, name: str, after: Optional[dict], languages=()
    ) -> Edit:
        """Build an edit with the before-hash taken from the current shadow."""
        langs = frozenset(languages) or self.shadow.languages
        matches = [
            o
            for o in self.shadow.objects
            if o.kind == kind and o.name == name and o.languages & langs
        ]
        before = matches[0].content_key() if matches else NEW_OBJECT
        return Edit(
            kind=kind,
            name=name,
            after=after,
            languages=tuple(sorted(langs)) if languages else (),
            before_hash=before,
        )

    def create_patch(self, note: str = "") -> Patch:
        if not self.pending:
            raise LatticeError("EMPTY-PATCH", "no pending edits")
        patch = Patch(
            id=uuid.uuid4().hex[:12],
            base_version=self.base.base_version,
            edits=list(self.pending),
            note=note,
            timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        )
        if self.directory:
            patch.save(os.path.join(self.directory, f"{patch.id}.patch.json"))
        return patch

    def apply_patch(self, patch: Patch) -> ResourceSet:
        """Stage a saved patch's edits onto the shadow (hash-checked)."""
        shadow = self.shadow
        for edit in patch.edits:
            shadow = apply_edit(shadow, edit, check_hash=True)
        report = shadow.validate()
        if not report.ok:
            raise ValidationFailed(report)
        self.shadow = shadow
        self.pending.extend(patch.edits)
        return shadow

    def accept_patches(
        self, patch: Optional[Patch] = None, force: bool = False
    ) -> ResourceSet:
        """Promote the shadow (or a given patch) to the new base.

        A patch replacing an entire region must first regenerate the whole
        suite without regressions; ``force`` skips the gate.
        """
        if patch is None:
            if not self.pending:
                raise LatticeError("EMPTY-PATCH", "nothing to accept")
            patch = self.create_patch()
            staged = self.shadow
        else:
            if patch.base_version and patch.base_version != self.base.base_version:
                raise LatticeError(
                    "STALE-PATCH",
                    f"patch built on {patch.base_version}, "
                    f"workspace at {self.base.base_version}",
                )
            staged = self.base
            for edit in patch.edits:
                staged = apply_edit(staged, edit, check_hash=True)
            report = staged.validate()
            if not report.ok:
                raise ValidationFailed(report)

        if not force and self.suite is not None and patch.replaced_regions(self.base):
            gate = run_suite(staged, self.suite, coverage=False)
            if not gate.ok:
                raise LatticeError(
                    "SUITE-REGRESSION",
                    f"region replacement blocked: {gate.failed} example(s) regressed",
                )

        accepted = replace(
            staged,
            base_version=staged.content_hash(),
            patch_ids=self.base.patch_ids + (patch.id,),
        )
        self.base = accepted
        self.shadow = accepted
        self.pending = []
        self.accepted_patches.append(patch)
        if self.directory:
            self._write_manifest()
            from .resources import save_resources

            save_resources(accepted, os.path.join(self.directory, "resources.json"))
        return accepted

    def discard(self) -> None:
        """Drop all pending edits and return to the base version."""
        self.shadow = self.base
        self.pending = []

    def run_suite_report(self) -> SuiteReport:
        if self.suite is None:
            return SuiteReport(suite="(none)")
        return run_suite(self.shadow, self.suite)

    def _write_manifest(self) -> None:
        manifest = {
            "base": self.base.base_version,
            "patches": [
                {"id": p.id, "note": p.note, "timestamp": p.timestamp}
                for p in self.accepted_patches
            ],
        }
        path = os.path.join(self.directory, "versions.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
