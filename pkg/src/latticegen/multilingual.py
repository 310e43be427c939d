"""Language-conditionalized resources: merging, extraction, lattice-segment
import, contrastive views, and sharing statistics.

Object identity for merging is (kind, name, canonical content): objects that
agree on all three unify with the union of their language sets; same-named
objects with different content stay as language-restricted variants.  The
same name with the same language but different content cannot be merged
automatically and is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import LatticeError
from .resources import RObj, ResourceSet, ValidationFailed


def merge(resource_sets: Sequence[ResourceSet], validate: bool = True) -> ResourceSet:
    """Unify several resource bundles into one multilingual bundle."""
    if not resource_sets:
        raise LatticeError("INCOMPATIBLE-SCHEMA", "nothing to merge")
    root = resource_sets[0].root_feature
    for rs in resource_sets[1:]:
        if rs.root_feature != root:
            raise LatticeError("INCOMPATIBLE-SCHEMA", "root features differ")
    languages = frozenset().union(*(rs.languages for rs in resource_sets))
    # (kind, name, content hash) -> RObj with accumulated languages
    unified: dict[tuple[str, str, str], RObj] = {}
    order: list[tuple[str, str, str]] = []
    for rs in resource_sets:
        for o in rs.objects:
            key = (o.kind, o.name, o.content_key())
            if key in unified:
                prev = unified[key]
                unified[key] = replace(prev, languages=prev.languages | o.languages)
            else:
                unified[key] = o
                order.append(key)
    # same (kind, name) with different content must not overlap in language
    by_name: dict[tuple[str, str], list[RObj]] = {}
    for key in order:
        o = unified[key]
        by_name.setdefault((o.kind, o.name), []).append(o)
    for (kind, name), variants in by_name.items():
        for i, a in enumerate(variants):
            for b in variants[i + 1 :]:
                overlap = a.languages & b.languages
                if overlap:
                    raise LatticeError(
                        "INCOMPATIBLE-SCHEMA",
                        f"{kind} {name}: conflicting content for {sorted(overlap)}",
                    )
    merged = ResourceSet(
        languages=languages,
        root_feature=root,
        objects=tuple(unified[key] for key in order),
    )
    merged = replace(merged, base_version=merged.content_hash())
    if validate:
        report = merged.validate()
        if not report.ok:
            raise ValidationFailed(report)
    return merged


def extract(rs: ResourceSet, langs: Iterable[str], validate: bool = True) -> ResourceSet:
    """Separate out the sub-resource for a language set: objects whose
    language sets intersect, with language sets intersected."""
    langs = frozenset(langs)
    unknown = langs - rs.languages
    if unknown:
        raise LatticeError("UNKNOWN-LANGUAGE", ", ".join(sorted(unknown)))
    kept = tuple(
        replace(o, languages=o.languages & langs)
        for o in rs.objects
        if o.languages & langs
    )
    out = ResourceSet(languages=langs, root_feature=rs.root_feature, objects=kept)
    out = replace(out, base_version=out.content_hash())
    if validate:
        report = out.validate()
        if not report.ok:
            raise ValidationFailed(report)
    return out


def import_segment(
    src: ResourceSet,
    selector,
    src_lang: str,
    dst: ResourceSet,
    dst_lang: str,
) -> ResourceSet:
    """Copy a lattice segment (a region name or an explicit system set) from
    one language into another, with its chooser/inquiry closure.

    The result is not re-validated: a freshly seeded language typically still
    needs its root stub before it validates.
    """
    if isinstance(selector, str):
        members = [
            o
            for o in src.of_kind("system", src_lang)
            if o.content.get("region") == selector
        ]
        if selector and not members and selector not in src.regions():
            raise LatticeError("UNKNOWN-REGION", selector)
    else:
        wanted = set(selector)
        members = [o for o in src.of_kind("system", src_lang) if o.name in wanted]
        missing = wanted - {o.name for o in members}
        if missing:
            raise LatticeError("UNKNOWN-SYSTEM", ", ".join(sorted(missing)))
    if not members:
        return dst

    # closure over choosers and their inquiries
    segment: list[RObj] = list(members)
    chooser_names = {
        o.content.get("chooser") for o in members if o.content.get("chooser")
    }
    chooser_objs = [
        o for o in src.of_kind("chooser", src_lang) if o.name in chooser_names
    ]
    segment.extend(chooser_objs)
    inquiry_names: set[str] = set()

    def collect_inquiries(node: dict) -> None:
        if "ask" in node:
            inquiry_names.add(node["ask"])
            for sub in node.get("branches", {}).values():
                collect_inquiries(sub)

    for o in chooser_objs:
        collect_inquiries(o.content.get("tree", {}))
    segment.extend(
        o for o in src.of_kind("inquiry", src_lang) if o.name in inquiry_names
    )

    # entry conditions must resolve inside the segment or in the destination
    segment_feats = {
        out["feature"] for o in members for out in o.content.get("outputs", ())
    }
    dst_feats = {
        out["feature"]
        for o in dst.of_kind("system", dst_lang)
        for out in o.content.get("outputs", ())
    } | {dst.root_feature}

    def cond_features(cond) -> list[str]:
        if cond is True or cond is None:
            return []
        if isinstance(cond, str):
            return [cond]
        out = []
        for part in cond.get("and", cond.get("or", ())):
            out.extend(cond_features(part))
        return out

    for o in members:
        for f in cond_features(o.content.get("entry", True)):
            if f not in segment_feats and f not in dst_feats and f != src.root_feature:
                raise LatticeError(
                    "DANGLING-CLOSURE",
                    f"{o.name}: entry feature {f} absent from segment and destination",
                )

    seg_rs = ResourceSet(
        languages=frozenset([dst_lang]),
        root_feature=dst.root_feature,
        objects=tuple(replace(o, languages=frozenset([dst_lang])) for o in segment),
    )
    return merge([dst, seg_rs], validate=False)


@dataclass
class SharingReport:
    merged_object_count: int
    original_counts: list[tuple[str, int]]  # (language-set label, count)
    ratio: float
    per_region: dict[str, tuple[int, int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "merged-objects": self.merged_object_count,
            "originals": [
                {"languages": label, "objects": n} for label, n in self.original_counts
            ],
            "ratio": self.ratio,
            "per-region": {
                region: {"merged": m, "separate": s}
                for region, (m, s) in sorted(self.per_region.items())
            },
        }


def sharing_stats(
    merged: ResourceSet, originals: Sequence[ResourceSet]
) -> SharingReport:
    """How much smaller the merged description is than the sum of its parts.
    Systems, choosers, inquiries and lexemes count uniformly as objects."""
    merged_count = len(merged.counted_objects())
    original_counts = [
        ("+".join(sorted(rs.languages)), len(rs.counted_objects())) for rs in originals
    ]
    total = sum(n for _, n in original_counts)
    ratio = merged_count / total if total else 1.0
    per_region: dict[str, tuple[int, int]] = {}
    regions = sorted(
        set(merged.regions()).union(*(rs.regions() for rs in originals))
        if originals
        else merged.regions()
    )
    for region in regions:
        m = sum(
            1
            for o in merged.objects
            if o.kind == "system" and o.content.get("region") == region
        )
        s = sum(
            1
            for rs in originals
            for o in rs.objects
            if o.kind == "system" and o.content.get("region") == region
        )
        per_region[region] = (m, s)
    return SharingReport(
        merged_object_count=merged_count,
        original_counts=original_counts,
        ratio=ratio,
        per_region=per_region,
    )


@dataclass
class ContrastiveView:
    region: str
    languages: tuple[str, ...]
    # name -> label ("SHARED" or "restricted-to-<codes>")
    systems: dict[str, str] = field(default_factory=dict)
    features: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "region": self.region,
            "languages": list(self.languages),
            "systems": dict(sorted(self.systems.items())),
            "features": dict(sorted(self.features.items())),
        }


def contrastive_view(
    rs: ResourceSet, langs: Iterable[str], region: str
) -> ContrastiveView:
    """Label a region's systems and features as held in common across the
    requested languages or restricted to a subset."""
    langs = tuple(sorted(frozenset(langs)))
    unknown = set(langs) - rs.languages
    if unknown:
        raise LatticeError("UNKNOWN-LANGUAGE", ", ".join(sorted(unknown)))
    members = [
        o
        for o in rs.of_kind("system")
        if o.content.get("region") == region and o.languages & set(langs)
    ]
    if not members:
        raise LatticeError("UNKNOWN-REGION", region)
    view = ContrastiveView(region=region, languages=langs)

    def label(obj_langs: frozenset[str]) -> str:
        visible = obj_langs & set(langs)
        if visible == set(langs):
            return "SHARED"
        return "restricted-to-" + "+".join(sorted(visible))

    for o in members:
        # variants of the same name are reported together: a name is SHARED
        # only if a single content serves all requested languages
        prev = view.systems.get(o.name)
        mine = label(o.languages)
        if prev is None:
            view.systems[o.name] = mine
        elif prev != mine or prev != "SHARED":
            # multiple variants cover the languages between them
            view.systems[o.name] = _combine_labels(prev, mine)
        for out in o.content.get("outputs", ()):
            flangs = frozenset(out.get("languages", ())) or o.languages
            fname = out["feature"]
            flabel = label(flangs)
            if fname not in view.features:
                view.features[fname] = flabel
            elif view.features[fname] != flabel:
                view.features[fname] = _combine_labels(view.features[fname], flabel)
    return view


def _combine_labels(a: str, b: str) -> str:
    if a == b:
        return a
    return "variant-per-language"
