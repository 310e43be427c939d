from __future__ import annotations

import json

import pytest

from conftest import EN_PATH
from latticegen.errors import LatticeError
from latticegen.resources import (
    ValidationFailed,
    canonical_text,
    content_hash,
    load_resources,
    save_resources,
)


class TestCanonicalForm:
    def test_canonical_round_trip_is_byte_identical(self, en_resources, tmp_path):
        path = tmp_path / "copy.json"
        save_resources(en_resources, str(path))
        with open(EN_PATH, encoding="utf-8") as fh:
            original = fh.read()
        assert path.read_text(encoding="utf-8") == original

    def test_load_save_load_fixpoint(self, tmp_path):
        first = load_resources([EN_PATH])
        p1 = tmp_path / "one.json"
        save_resources(first, str(p1))
        second = load_resources([str(p1)])
        assert second.canonical_text() == first.canonical_text()
        assert second.base_version == first.base_version

    def test_content_hash_is_stable_and_content_sensitive(self):
        assert content_hash({"a": 1}) == content_hash({"a": 1})
        assert content_hash({"a": 1}) != content_hash({"a": 2})
        # key order does not matter
        assert canonical_text({"b": 1, "a": 2}) == canonical_text({"a": 2, "b": 1})


class TestLoading:
    def test_fixture_counts(self, en_resources):
        assert len(en_resources.of_kind("system", "en")) == 26
        assert len(en_resources.of_kind("lexeme", "en")) >= 30
        assert en_resources.regions() == [
            "MOOD", "NOMINAL-GROUP", "THEME", "TRANSITIVITY",
        ]

    def test_missing_file(self):
        with pytest.raises(LatticeError) as err:
            load_resources(["/nonexistent/res.json"])
        assert err.value.code == "PARSE-ERROR"

    def test_malformed_file_reports_location(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"language-codes": ["en"],\n  "systems": [}', encoding="utf-8")
        with pytest.raises(LatticeError) as err:
            load_resources([str(bad)])
        assert err.value.code == "PARSE-ERROR"
        assert "line" in str(err.value)

    def test_empty_file_list(self):
        with pytest.raises(ValidationFailed):
            load_resources([])

    def test_invalid_resources_rejected(self, tmp_path):
        doc = {
            "language-codes": ["en"],
            "root-feature": "start",
            "systems": [
                {
                    "name": "LOOP",
                    "region": "A",
                    "entry": "x",
                    "outputs": [{"feature": "x", "realizations": []}],
                }
            ],
        }
        path = tmp_path / "loop.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(ValidationFailed) as err:
            load_resources([str(path)])
        assert any(c == "CYCLE" for c, _, _ in err.value.report.errors)

    def test_multi_file_concatenation(self, tmp_path, en_resources):
        doc = en_resources.to_json()
        half_a = dict(doc)
        half_b = dict(doc)
        half_a["lexemes"] = doc["lexemes"][: len(doc["lexemes"]) // 2]
        half_b = {
            "language-codes": doc["language-codes"],
            "root-feature": doc["root-feature"],
            "lexemes": doc["lexemes"][len(doc["lexemes"]) // 2 :],
        }
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        pa.write_text(json.dumps(half_a), encoding="utf-8")
        pb.write_text(json.dumps(half_b), encoding="utf-8")
        combined = load_resources([str(pa), str(pb)])
        assert combined.canonical_text() == en_resources.canonical_text()


class TestLanguageViews:
    def test_network_view(self, en_resources):
        net = en_resources.network("en")
        assert len(net.systems) == 26
        assert net.root_feature == "start"

    def test_lexicon_forms(self, en_resources):
        lex = en_resources.lexicon("en")
        chase = lex["chase"]
        forms = chase.form_map()
        assert forms[frozenset()] == "chase"
        assert forms[frozenset({"present", "third-singular"})] == "chases"
        assert forms[frozenset({"past"})] == "chased"

    def test_morphology_view(self, en_resources):
        morph = en_resources.morphology("en")
        assert morph["past"] == ("Finite", frozenset({"past"}))
        assert morph["plural-thing"] == ("Thing", frozenset({"plural"}))

    def test_punctuation_view(self, en_resources):
        marks = en_resources.punctuation("en")
        assert marks["interrogative"] == "?"
        assert marks["declarative"] == "."

    def test_unknown_language_rejected(self, en_resources):
        with pytest.raises(LatticeError) as err:
            en_resources.network("zz")
        assert err.value.code == "UNKNOWN-LANGUAGE"

    def test_statement_ids_unique_per_view(self, en_resources):
        net = en_resources.network("en")
        ids = [
            r.id
            for s in net.systems
            for o in s.outputs
            for r in o.realizations
        ]
        assert len(ids) == len(set(ids))
