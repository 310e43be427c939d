"""Command-line front end.

Exit codes: 0 success, 1 resource or generation errors, 2 usage errors.
Resource files come from ``--resources`` (repeatable) or the
``LATTICEGEN_RESOURCES`` environment variable (path-separator separated).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .errors import LatticeError
from .generator import generate
from .multilingual import extract, import_segment, merge, sharing_stats
from .regions import export_graph, region_graph, region_view
from .resources import ResourceSet, load_resources, save_resources
from .semantics import parse_spl
from .suite import Suite, SuiteReport, run_suite
from .trace import TraceDiff, diff_traces, trace_log, where_introduced
from .workspace import Edit, Patch, Workspace

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

DEFAULT_DATA = os.path.join(os.path.dirname(__file__), "data", "toy-en.json")


def _resource_paths(args) -> list[str]:
    if getattr(args, "resources", None):
        return list(args.resources)
    env = os.environ.get("LATTICEGEN_RESOURCES")
    if env:
        return [p for p in env.split(os.pathsep) if p]
    return [DEFAULT_DATA]


def _load(args) -> ResourceSet:
    return load_resources(_resource_paths(args))


def _emit_json(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))


def emit(report, format: str = "text") -> str:
    """Render a report for humans or as schema-exact JSON."""
    if format == "json":
        doc = report.to_json() if hasattr(report, "to_json") else report
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    if isinstance(report, SuiteReport):
        lines = [
            f"{r.name}: {'PASS' if r.passed else 'FAIL'}"
            + ("" if r.passed else f" (expected {r.expected!r}, got {r.actual!r})")
            for r in report.results
        ]
        lines.append(report.summary())
        return "\n".join(lines)
    if isinstance(report, TraceDiff):
        if report.identical:
            return "traces identical"
        path, system, fa, fb = report.first_divergence
        return f"first divergence: unit {path}, system {system}: {fa!r} vs {fb!r}"
    if hasattr(report, "ratio"):  # SharingReport
        lines = [f"merged objects: {report.merged_object_count}"]
        for label, n in report.original_counts:
            lines.append(f"  {label}: {n}")
        lines.append(f"ratio: {report.ratio:.2f}")
        return "\n".join(lines)
    if hasattr(report, "to_json"):
        return json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=False)
    return str(report)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_generate(args) -> int:
    rs = _load(args)
    if os.path.exists(args.spl):
        with open(args.spl, "r", encoding="utf-8") as fh:
            text = fh.read()
    elif args.spl.lstrip().startswith("("):
        text = args.spl
    else:
        print(f"error: no such file: {args.spl}", file=sys.stderr)
        return EXIT_ERROR
    graph = parse_spl(text)
    result = generate(rs, graph, args.lang)
    if args.format == "json":
        _emit_json(result.to_json())
    else:
        print(result.string)
        if not result.complete:
            print(f"[partial: {result.reason}]", file=sys.stderr)
    if args.trace:
        log = trace_log(result)
        log["spl"] = text
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(log, fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
    return EXIT_OK if result.complete else EXIT_ERROR


def cmd_test(args) -> int:
    rs = _load(args)
    suite = Suite.load(args.suite)
    report = run_suite(rs, suite)
    print(emit(report, args.format))
    return EXIT_OK if report.ok else EXIT_ERROR


def cmd_validate(args) -> int:
    try:
        rs = _load(args)
    except LatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = rs.validate()
    if args.format == "json":
        _emit_json(report.to_json())
    else:
        for code, obj, msg in report.errors:
            print(f"ERROR {code} {obj}: {msg}")
        for code, obj, msg in report.warnings:
            print(f"WARN  {code} {obj}: {msg}")
        print("OK" if report.ok else f"{len(report.errors)} error(s)")
    return EXIT_OK if report.ok else EXIT_ERROR


def cmd_merge(args) -> int:
    sets = [load_resources([p]) for p in args.inputs]
    merged = merge(sets)
    save_resources(merged, args.output)
    if args.stats:
        print(emit(sharing_stats(merged, sets), args.format))
    return EXIT_OK


def cmd_extract(args) -> int:
    rs = _load(args)
    out = extract(rs, args.langs.split(","))
    save_resources(out, args.output)
    return EXIT_OK


def cmd_import_segment(args) -> int:
    src = load_resources([args.source])
    dst = _load(args)
    out = import_segment(src, args.region, args.from_lang, dst, args.to_lang)
    save_resources(out, args.output)
    return EXIT_OK


def cmd_stats(args) -> int:
    rs = _load(args)
    singles = [extract(rs, [lang], validate=False) for lang in sorted(rs.languages)]
    print(emit(sharing_stats(rs, singles), args.format))
    return EXIT_OK


def cmd_regions(args) -> int:
    rs = _load(args)
    lang = args.lang or sorted(rs.languages)[0]
    net = rs.network(lang)
    if args.action == "graph":
        print(export_graph(region_graph(net), args.graph_format), end="")
    else:
        if not args.name:
            print("error: regions view needs a region name", file=sys.stderr)
            return EXIT_USAGE
        print(export_graph(region_view(net, args.name), args.graph_format), end="")
    return EXIT_OK


def cmd_focus(args) -> int:
    # generation is deterministic, so regenerating from the example's own
    # semantic spec reproduces the saved trace exactly
    with open(args.result, "r", encoding="utf-8") as fh:
        log = json.load(fh)
    spl = log.get("spl")
    if not spl:
        print("error: trace file lacks an embedded semantic spec", file=sys.stderr)
        return EXIT_ERROR
    rs = _load(args)
    lang = log.get("language") or sorted(rs.languages)[0]
    result = generate(rs, parse_spl(spl), lang)
    record = result.unit_by_path(args.unit)
    if record is None:
        print(f"error: no unit at path {args.unit}", file=sys.stderr)
        return EXIT_ERROR
    report = where_introduced(result, record.id, args.aspect, net=rs.network(lang))
    if args.format == "json":
        _emit_json(report.to_json())
    else:
        for e in report.entries:
            print(f"{e.statement} <- {e.system}:{e.feature} [{e.context}]")
    return EXIT_OK


def cmd_diff_traces(args) -> int:
    with open(args.a, "r", encoding="utf-8") as fh:
        a = json.load(fh)
    with open(args.b, "r", encoding="utf-8") as fh:
        b = json.load(fh)
    diff = diff_traces(a, b)
    print(emit(diff, args.format))
    return EXIT_OK


def cmd_patch(args) -> int:
    rs = _load(args)
    suite = Suite.load(args.suite) if args.suite else None
    ws = Workspace(rs, suite=suite, directory=args.dir)
    if args.action == "create":
        with open(args.edits, "r", encoding="utf-8") as fh:
            edits = [Edit.from_json(e) for e in json.load(fh)]
        for edit in edits:
            ws.record_edit(edit)
        patch = ws.create_patch(note=args.note or "")
        patch.save(args.output or f"{patch.id}.patch.json")
        print(patch.id)
        return EXIT_OK
    patch = Patch.load(args.patch)
    accepted = ws.accept_patches(patch, force=args.force)
    if args.output:
        save_resources(accepted, args.output)
    print(accepted.base_version)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    rs = _load(args)
    suite = Suite.load(args.suite) if args.suite else None
    serve(Workspace(rs, suite=suite), port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticegen",
        description="systemic sentence generation and grammar development",
    )
    parser.add_argument(
        "--resources", "-r", action="append", help="resource file (repeatable)"
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a sentence from a semantic spec")
    p.add_argument("spl", help="SPL file or inline SPL text")
    p.add_argument("--lang", default="en")
    p.add_argument("--trace", help="write the decision log to this file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("test", help="run a regression suite")
    p.add_argument("suite")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("validate", help="validate loaded resources")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("merge", help="merge resource files into one bundle")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("extract", help="extract a language subset")
    p.add_argument("--langs", required=True, help="comma-separated language codes")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("import-segment", help="seed a region from another language")
    p.add_argument("--source", required=True)
    p.add_argument("--region", required=True)
    p.add_argument("--from-lang", required=True)
    p.add_argument("--to-lang", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_import_segment)

    p = sub.add_parser("stats", help="multilingual sharing statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("regions", help="region graph and views")
    p.add_argument("action", choices=("graph", "view"))
    p.add_argument("name", nargs="?")
    p.add_argument("--lang")
    p.add_argument("--graph-format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("focus", help="where-introduced query on a saved result")
    p.add_argument("result")
    p.add_argument("unit")
    p.add_argument("aspect")
    p.set_defaults(func=cmd_focus)

    p = sub.add_parser("diff-traces", help="first divergence between two traces")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_diff_traces)

    p = sub.add_parser("patch", help="create or accept resource patches")
    p.add_argument("action", choices=("create", "accept"))
    p.add_argument("--edits", help="JSON file of edits (create)")
    p.add_argument("--patch", help="patch file (accept)")
    p.add_argument("--suite", help="suite gating region replacements")
    p.add_argument("--note")
    p.add_argument("--dir", help="workspace directory for manifests")
    p.add_argument("--force", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_patch)

    p = sub.add_parser("serve", help="run the inspection HTTP service")
    p.add_argument("--port", type=int, default=8040)
    p.add_argument("--suite")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except LatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
