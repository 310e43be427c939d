"""HTTP+JSON inspection service.

Every payload is a direct projection of a domain type; the service adds no
semantics of its own.  Results are cached per session under stable ids so
the companion UI can focus on any past generation cycle, and a snapshot
export lets two cycles be diffed after a restart.

Readers always see a consistent resource version: edits go through the
workspace's shadow mechanism, and cached results remember the version that
produced them.
"""

from __future__ import annotations

import itertools
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import LatticeError, SyntaxProblem
from .generator import GenerationResult, generate
from .network import INFINITE_RADIUS
from .regions import region_graph, region_view
from .resources import ValidationFailed
from .semantics import parse_spl
from .suite import run_suite
from .trace import (
    MarkedFragment,
    decision_path,
    diff_traces,
    selection_expression,
    trace_log,
    where_introduced,
)
from .workspace import Patch, Workspace


class GenerateBody(BaseModel):
    spl: str
    lang: str


class EditBody(BaseModel):
    kind: str
    name: str
    after: Optional[dict] = None
    languages: list[str] = []


class PatchAcceptBody(BaseModel):
    patch: Optional[dict] = None
    force: bool = False


class SuiteRunBody(BaseModel):
    suite: Optional[str] = None  # path; None runs the workspace suite


class Session:
    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self.results: dict[str, GenerationResult] = {}
        self.spl: dict[str, str] = {}
        self.versions: dict[str, str] = {}
        self._ids = itertools.count()

    def store(self, result: GenerationResult, spl: str) -> str:
        result_id = f"r{next(self._ids)}"
        self.results[result_id] = result
        self.spl[result_id] = spl
        self.versions[result_id] = self.workspace.current.content_hash()
        return result_id

    def result(self, result_id: str) -> GenerationResult:
        if result_id not in self.results:
            raise HTTPException(status_code=404, detail=f"unknown result {result_id}")
        return self.results[result_id]

    def snapshot(self) -> dict:
        return {
            "results": {
                rid: {**trace_log(res), "spl": self.spl.get(rid, "")}
                for rid, res in self.results.items()
            },
            "resource-version": {
                "base": self.workspace.current.base_version,
                "patches": list(self.workspace.current.patch_ids),
            },
        }


def _domain_error(exc: LatticeError):
    if isinstance(exc, ValidationFailed):
        return JSONResponse(status_code=422, content=exc.report.to_json())
    if exc.code == "STALE-PATCH":
        return JSONResponse(status_code=409, content={"code": exc.code, "message": str(exc)})
    if isinstance(exc, SyntaxProblem) or exc.code in (
        "SYNTAX-ERROR",
        "UNRESOLVED-REF",
        "BAD-CONDITION",
        "UNKNOWN-VIEW",
        "UNKNOWN-ASPECT",
    ):
        return JSONResponse(status_code=400, content={"code": exc.code, "message": str(exc)})
    if exc.code.startswith("UNKNOWN-"):
        return JSONResponse(status_code=404, content={"code": exc.code, "message": str(exc)})
    return JSONResponse(status_code=422, content={"code": exc.code, "message": str(exc)})


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="latticegen inspection service")
    session = Session(workspace)
    app.state.session = session

    @app.exception_handler(LatticeError)
    async def handle_domain_error(request, exc: LatticeError):
        return _domain_error(exc)

    def unit_record(result: GenerationResult, unit: str):
        if unit in result.units:
            return result.units[unit]
        record = result.unit_by_path(unit)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown unit {unit}")
        return record

    @app.post("/generate")
    def post_generate(body: GenerateBody):
        graph = parse_spl(body.spl)
        result = generate(workspace.current, graph, body.lang)
        result_id = session.store(result, body.spl)
        return {
            "result_id": result_id,
            "string": result.string,
            "status": result.status,
            "structure": result.structure_json(),
            "tokens": [
                {"text": t.text, "bundle": t.bundle, "unit": t.unit}
                for t in result.tokens
            ],
            "units": sorted(result.units),
            "resource-version": {
                "base": result.resource_version[0],
                "patches": list(result.resource_version[1]),
            },
        }

    @app.get("/result/{result_id}")
    def get_result(result_id: str):
        return session.result(result_id).to_json()

    @app.get("/result/{result_id}/unit/{unit:path}/se")
    def get_se(result_id: str, unit: str, view: str = "list"):
        result = session.result(result_id)
        record = unit_record(result, unit)
        lang = result.language
        net = workspace.current.network(lang) if view == "subgraph" else None
        se = selection_expression(result, record.id, view, net=net)
        if view == "list":
            return {
                "view": view,
                "unit": record.id,
                "path": record.path,
                "selection": [{"feature": f, "system": s} for f, s in se],
            }
        if view == "replay":
            return {
                "view": view,
                "unit": record.id,
                "path": record.path,
                "events": [e.to_json() for e in se],
            }
        assert isinstance(se, MarkedFragment)
        return {"view": view, "unit": record.id, "path": record.path, **se.to_json()}

    @app.get("/result/{result_id}/unit/{unit:path}/focus")
    def get_focus(result_id: str, unit: str, aspect: str):
        result = session.result(result_id)
        record = unit_record(result, unit)
        net = workspace.current.network(result.language)
        return where_introduced(result, record.id, aspect, net=net).to_json()

    @app.get("/result/{result_id}/unit/{unit:path}/system/{system}/chooser-path")
    def get_chooser_path(result_id: str, unit: str, system: str):
        result = session.result(result_id)
        record = unit_record(result, unit)
        outcome = decision_path(result, record.id, system)
        return {
            "system": system,
            "unit": record.id,
            "feature": outcome.feature,
            "path": [
                {"inquiry": n, "bindings": dict(b), "answer": a}
                for n, b, a in outcome.path
            ],
        }

    @app.get("/lattice")
    def get_lattice(focus: str, radius: int = INFINITE_RADIUS, lang: Optional[str] = None):
        lang = lang or sorted(workspace.current.languages)[0]
        net = workspace.current.network(lang)
        return net.lattice_subgraph(focus, radius).to_json()

    @app.get("/regions/graph")
    def get_region_graph(lang: Optional[str] = None):
        lang = lang or sorted(workspace.current.languages)[0]
        return region_graph(workspace.current.network(lang)).to_json()

    @app.get("/regions/{name}/view")
    def get_region_view(name: str, lang: Optional[str] = None):
        lang = lang or sorted(workspace.current.languages)[0]
        return region_view(workspace.current.network(lang), name).to_json()

    @app.get("/system/{name}")
    def get_system(name: str, lang: Optional[str] = None):
        lang = lang or sorted(workspace.current.languages)[0]
        net = workspace.current.network(lang)
        if name not in net.by_name:
            raise HTTPException(status_code=404, detail=f"unknown system {name}")
        s = net.by_name[name]
        return {
            "name": s.name,
            "region": s.region,
            "entry": s.entry.to_json(),
            "context": str(net.paradigmatic_context(name)),
            "chooser": s.chooser,
            "outputs": [
                {
                    "feature": o.feature,
                    "realizations": [r.to_json() for r in o.realizations],
                }
                for o in s.outputs
            ],
        }

    @app.post("/edit")
    def post_edit(body: EditBody):
        edit = workspace.anchored_edit(
            body.kind, body.name, body.after, tuple(body.languages)
        )
        workspace.record_edit(edit)
        return {
            "pending-edits": len(workspace.pending),
            "shadow-version": workspace.current.content_hash(),
        }

    @app.post("/patch/create")
    def post_patch_create(note: str = ""):
        patch = workspace.create_patch(note=note)
        return patch.to_json()

    @app.post("/patch/accept")
    def post_patch_accept(body: PatchAcceptBody):
        patch = Patch.from_json(body.patch) if body.patch else None
        accepted = workspace.accept_patches(patch, force=body.force)
        return {
            "base": accepted.base_version,
            "patches": list(accepted.patch_ids),
        }

    @app.post("/suite/run")
    def post_suite_run(body: SuiteRunBody):
        if body.suite:
            from .suite import Suite

            suite = Suite.load(body.suite)
            report = run_suite(workspace.current, suite)
        else:
            report = workspace.run_suite_report()
        return {
            "suite": report.suite,
            "passed": report.passed,
            "failed": report.failed,
            "results": report.to_json(),
            "coverage-gaps": report.coverage_gaps,
        }

    @app.get("/diff")
    def get_diff(a: str, b: str):
        ra, rb = session.result(a), session.result(b)
        payload = diff_traces(ra, rb).to_json()
        va, vb = session.versions.get(a), session.versions.get(b)
        if va != vb:
            payload["lineage-warning"] = {
                "message": "results were produced by different resource versions",
                "a": va,
                "b": vb,
            }
        return payload

    @app.get("/snapshot")
    def get_snapshot():
        return session.snapshot()

    return app


def serve(workspace: Workspace, port: int = 8040) -> None:
    import uvicorn

    uvicorn.run(create_app(workspace), host="127.0.0.1", port=port)
