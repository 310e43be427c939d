"""Record real HTTP payloads from the inspection service into
frontend/fixtures/, so the UI test suite runs against genuine responses
without a live server."""

from __future__ import annotations

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fastapi.testclient import TestClient

from latticegen.resources import load_resources
from latticegen.service import create_app
from latticegen.suite import Suite
from latticegen.workspace import Workspace

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "latticegen", "data")
OUT = os.path.join(os.path.dirname(__file__), "..", "frontend", "fixtures")

CHASE = "(e / chase :actor (c / cat) :actee (m / mouse))"
QUESTION = "(e / chase :speech-act question :actor (c / cat) :actee (m / mouse))"


def save(name: str, payload: dict) -> None:
    path = os.path.join(OUT, f"{name}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    print(f"wrote {path}")


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    resources = load_resources([os.path.join(DATA, "toy-en.json")])
    suite = Suite.load(os.path.join(DATA, "toy-en.suite.json"))
    workspace = Workspace(resources, suite=suite)
    client = TestClient(create_app(workspace))

    declarative = client.post("/generate", json={"spl": CHASE, "lang": "en"}).json()
    save("generate-declarative", declarative)
    question = client.post("/generate", json={"spl": QUESTION, "lang": "en"}).json()
    save("generate-question", question)

    rid = declarative["result_id"]
    unit = declarative["structure"]["unit"]
    for view in ("list", "replay", "subgraph"):
        payload = client.get(
            f"/result/{rid}/unit/{unit}/se", params={"view": view}
        ).json()
        save(f"se-{view}", payload)

    for sub in declarative["units"]:
        payload = client.get(
            f"/result/{rid}/unit/{sub}/se", params={"view": "list"}
        ).json()
        save(f"se-list-{sub}", payload)

    save(
        "chooser-path-mood",
        client.get(f"/result/{rid}/unit/{unit}/system/MOOD-TYPE/chooser-path").json(),
    )
    save("system-mood-type", client.get("/system/MOOD-TYPE").json())
    save("region-graph", client.get("/regions/graph").json())
    save("region-view-theme", client.get("/regions/THEME/view").json())

    # the edit-and-regenerate loop: swap the determiner chooser's leaves,
    # regenerate the same input, diff against the original result
    chooser = resources.find("chooser", "determination-chooser")[0]
    content = dict(chooser.content)
    content["tree"] = {
        "ask": "identifiability-query",
        "bindings": {"item": []},
        "branches": {
            "identifiable": {"choose": "indefinite"},
            "nonidentifiable": {"choose": "definite"},
        },
    }
    client.post(
        "/edit",
        json={"kind": "chooser", "name": "determination-chooser", "after": content},
    )
    mutated = client.post("/generate", json={"spl": CHASE, "lang": "en"}).json()
    save("generate-mutated", mutated)
    save(
        "diff-mutation",
        client.get(
            "/diff", params={"a": rid, "b": mutated["result_id"]}
        ).json(),
    )


if __name__ == "__main__":
    main()
