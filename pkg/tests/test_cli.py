from __future__ import annotations

import json

from conftest import DE_PATH, EN_PATH, EN_SUITE_PATH
from latticegen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenerate:
    def test_inline_spl(self, capsys):
        code, out, _ = run(
            capsys, "-r", EN_PATH, "generate",
            "(e / chase :actor (c / cat) :actee (m / mouse))", "--lang", "en",
        )
        assert code == 0
        assert out.strip() == "The cat chases the mouse."

    def test_spl_file(self, capsys, tmp_path):
        spl = tmp_path / "chase.spl"
        spl.write_text("(e / chase :actor (c / cat) :actee (m / mouse))")
        code, out, _ = run(capsys, "-r", EN_PATH, "generate", str(spl), "--lang", "en")
        assert code == 0
        assert out.strip() == "The cat chases the mouse."

    def test_repeated_runs_byte_identical(self, capsys):
        outputs = set()
        for _ in range(3):
            _, out, _ = run(
                capsys, "-r", EN_PATH, "generate",
                "(e / see :actor (d / dog) :actee (b / bird))", "--lang", "en",
            )
            outputs.add(out)
        assert len(outputs) == 1

    def test_missing_file_exit_1(self, capsys):
        code, _, err = run(capsys, "-r", EN_PATH, "generate", "missing.spl")
        assert code == 1
        assert "no such file" in err

    def test_json_output_round_trips(self, capsys):
        code, out, _ = run(
            capsys, "-r", EN_PATH, "--format", "json", "generate",
            "(e / sleep :actor (c / cat))", "--lang", "en",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["string"] == "The cat sleeps."
        assert doc["status"] == "complete"

    def test_trace_export(self, capsys, tmp_path):
        trace = tmp_path / "out.trace.json"
        code, _, _ = run(
            capsys, "-r", EN_PATH, "generate",
            "(e / sleep :actor (c / cat))", "--lang", "en", "--trace", str(trace),
        )
        assert code == 0
        doc = json.loads(trace.read_text())
        assert doc["string"] == "The cat sleeps."
        assert doc["spl"].startswith("(e / sleep")


class TestSuiteAndValidate:
    def test_clean_suite_reports_all_pass(self, capsys):
        code, out, _ = run(capsys, "-r", EN_PATH, "test", EN_SUITE_PATH)
        assert code == 0
        assert "18/18 PASS" in out

    def test_validate_fixture(self, capsys):
        code, out, _ = run(capsys, "-r", EN_PATH, "validate")
        assert code == 0
        assert "OK" in out

    def test_usage_error_exit_2(self, capsys):
        code, _, _ = run(capsys, "no-such-command")
        assert code == 2


class TestRegionCommands:
    def test_graph_dot(self, capsys):
        code, out, _ = run(capsys, "-r", EN_PATH, "regions", "graph")
        assert code == 0
        assert out.startswith("digraph")
        for region in ("MOOD", "TRANSITIVITY", "THEME", "NOMINAL-GROUP"):
            assert region in out

    def test_graph_deterministic(self, capsys):
        _, out1, _ = run(capsys, "-r", EN_PATH, "regions", "graph")
        _, out2, _ = run(capsys, "-r", EN_PATH, "regions", "graph")
        assert out1 == out2

    def test_view(self, capsys):
        code, out, _ = run(
            capsys, "-r", EN_PATH, "regions", "view", "THEME",
            "--graph-format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc["systems"]) == 3


class TestMultilingualCommands:
    def test_merge_and_extract(self, capsys, tmp_path):
        merged = tmp_path / "merged.json"
        code, _, _ = run(capsys, "merge", EN_PATH, DE_PATH, "-o", str(merged))
        assert code == 0
        out_path = tmp_path / "en.json"
        code, _, _ = run(
            capsys, "-r", str(merged), "extract", "--langs", "en", "-o", str(out_path)
        )
        assert code == 0
        assert out_path.read_text() == open(EN_PATH).read()

    def test_stats_reports_ratio(self, capsys, tmp_path):
        merged = tmp_path / "merged.json"
        run(capsys, "merge", EN_PATH, DE_PATH, "-o", str(merged))
        code, out, _ = run(capsys, "-r", str(merged), "stats")
        assert code == 0
        assert "ratio: 0.66" in out


class TestDiffCommand:
    def test_first_divergence_named(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(
            capsys, "-r", EN_PATH, "generate",
            "(e / chase :actor (c / cat) :actee (m / mouse))",
            "--lang", "en", "--trace", str(a),
        )
        run(
            capsys, "-r", EN_PATH, "generate",
            "(e / chase :tense past :actor (c / cat) :actee (m / mouse))",
            "--lang", "en", "--trace", str(b),
        )
        code, out, _ = run(capsys, "diff-traces", str(a), str(b))
        assert code == 0
        assert "TENSE" in out

    def test_identical_traces(self, capsys, tmp_path):
        a = tmp_path / "a.json"
        run(
            capsys, "-r", EN_PATH, "generate",
            "(e / sleep :actor (c / cat))", "--lang", "en", "--trace", str(a),
        )
        code, out, _ = run(capsys, "diff-traces", str(a), str(a))
        assert code == 0
        assert "identical" in out


class TestFocusCommand:
    def test_focus_on_saved_trace(self, capsys, tmp_path):
        trace = tmp_path / "t.json"
        run(
            capsys, "-r", EN_PATH, "generate",
            "(e / chase :actor (c / cat) :actee (m / mouse))",
            "--lang", "en", "--trace", str(trace),
        )
        code, out, _ = run(capsys, "-r", EN_PATH, "focus", str(trace), "/", "function")
        assert code == 0
        assert "MOOD-TYPE" in out and "insert" in out
