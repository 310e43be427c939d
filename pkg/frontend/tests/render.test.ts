import { describe, expect, it } from "vitest";

import {
  ChooserPathPayload,
  DiffPayload,
  GeneratePayload,
  RegionGraphPayload,
  SeListPayload,
  SeReplayPayload,
  SeSubgraphPayload,
  SystemPayload,
} from "../src/api.js";
import {
  renderDiff,
  renderRegionGraph,
  renderResult,
  renderSePanel,
  renderSystemView,
} from "../src/render.js";
import { byClass, click, textContent } from "../src/vdom.js";
import { fixture } from "./fixtures.js";

describe("renderResult", () => {
  const payload = fixture<GeneratePayload>("generate-declarative");

  it("renders five clickable tokens for the declarative fixture", () => {
    const selected: string[] = [];
    const node = renderResult(payload, (b) => selected.push(b));
    const tokens = byClass(node, "token");
    expect(tokens).toHaveLength(5);
    for (const token of tokens) click(token);
    expect(selected).toEqual(payload.tokens.map((t) => t.bundle));
  });

  it("renders a clickable structure tree covering every constituent", () => {
    const node = renderResult(payload, () => undefined);
    const treeNodes = byClass(node, "tree-node");
    const expectBundles = (s: typeof payload.structure): string[] =>
      s.constituents.flatMap((c) => [c.bundle, ...(c.unit ? expectBundles(c.unit) : [])]);
    expect(treeNodes.map((n) => n.attrs["data-bundle"]).sort()).toEqual(
      expectBundles(payload.structure).sort(),
    );
    for (const n of treeNodes) click(n); // all clickable
  });

  it("shows a banner for a partial result", () => {
    const partial = { ...payload, status: "partial" };
    const node = renderResult(partial, () => undefined);
    expect(byClass(node, "banner")).toHaveLength(1);
    expect(textContent(byClass(node, "banner")[0])).toContain("partial");
  });
});

describe("renderSePanel", () => {
  it("list mode has one entry per selection-expression feature", () => {
    const payload = fixture<SeListPayload>("se-list");
    const node = renderSePanel(payload, () => undefined)!;
    expect(byClass(node, "se-entry")).toHaveLength(payload.selection.length);
  });

  it("list entries open the system view; featureless entries do not", () => {
    const payload = fixture<SeListPayload>("se-list");
    const opened: string[] = [];
    const node = renderSePanel(payload, (name) => opened.push(name))!;
    const entries = byClass(node, "se-entry");
    for (const entry of entries) {
      if (entry.onClick) click(entry);
    }
    expect(opened).toEqual(
      payload.selection.filter((e) => e.system !== null).map((e) => e.system),
    );
  });

  it("hides the panel for an empty selection", () => {
    const payload: SeListPayload = { view: "list", unit: "u9", path: "/x", selection: [] };
    expect(renderSePanel(payload, () => undefined)).toBeNull();
  });

  it("replay mode has one step per fired system", () => {
    const replay = fixture<SeReplayPayload>("se-replay");
    const list = fixture<SeListPayload>("se-list");
    const fired = list.selection.filter((e) => e.system !== null);
    const node = renderSePanel(replay, () => undefined)!;
    const steps = byClass(node, "replay-step");
    expect(steps).toHaveLength(replay.events.length);
    expect(steps).toHaveLength(fired.length);
    expect(byClass(node, "play")).toHaveLength(1);
    expect(byClass(node, "pause")).toHaveLength(1);
    expect(byClass(node, "step")).toHaveLength(1);
  });

  it("subgraph mode highlights exactly the chosen feature of each system", () => {
    const subgraph = fixture<SeSubgraphPayload>("se-subgraph");
    const list = fixture<SeListPayload>("se-list");
    const chosenBySystem = new Map(
      list.selection.filter((e) => e.system !== null).map((e) => [e.system!, e.feature]),
    );
    const node = renderSePanel(subgraph, () => undefined)!;
    const systems = byClass(node, "lattice-system");
    expect(systems).toHaveLength(subgraph.systems.length);
    for (const systemNode of systems) {
      const name = systemNode.attrs["data-system"];
      const highlighted = byClass(systemNode, "chosen").map(
        (n) => n.attrs["data-feature"],
      );
      expect(highlighted).toEqual([chosenBySystem.get(name)]);
    }
  });
});

describe("renderSystemView", () => {
  const system = fixture<SystemPayload>("system-mood-type");
  const path = fixture<ChooserPathPayload>("chooser-path-mood");

  it("shows the paradigmatic context before the disjunction", () => {
    const node = renderSystemView(system, null);
    const context = byClass(node, "context");
    expect(context).toHaveLength(1);
    expect(textContent(context[0])).toBe("clause");
    expect(node.children.indexOf(context[0])).toBeLessThan(
      node.children.findIndex(
        (c) => typeof c !== "string" && c.tag === "h2",
      ),
    );
  });

  it("shows a chooser-path badge when the system fired", () => {
    const node = renderSystemView(system, path);
    const badge = byClass(node, "chooser-path-badge");
    expect(badge).toHaveLength(1);
    expect(badge[0].attrs["data-feature"]).toBe("declarative");
    expect(textContent(badge[0])).toContain("command-query=statement");
  });

  it("shows no path badge for an unfired system", () => {
    const node = renderSystemView(system, null);
    expect(byClass(node, "chooser-path-badge")).toHaveLength(0);
  });

  it("lists every output with its realization statements", () => {
    const node = renderSystemView(system, null);
    expect(byClass(node, "output")).toHaveLength(system.outputs.length);
    const total = system.outputs.reduce((n, o) => n + o.realizations.length, 0);
    expect(byClass(node, "realization")).toHaveLength(total);
  });
});

describe("renderRegionGraph", () => {
  it("acts as a menu: clicking a node opens that region", () => {
    const payload = fixture<RegionGraphPayload>("region-graph");
    const opened: string[] = [];
    const node = renderRegionGraph(payload, (r) => opened.push(r));
    const buttons = byClass(node, "region-node");
    expect(buttons).toHaveLength(payload.nodes.length);
    for (const b of buttons) click(b);
    expect(opened).toEqual(payload.nodes);
    expect(byClass(node, "region-edge")).toHaveLength(payload.edges.length);
  });
});

describe("renderDiff", () => {
  it("badges the first divergence with the mutated system", () => {
    const payload = fixture<DiffPayload>("diff-mutation");
    const node = renderDiff(payload);
    const badge = byClass(node, "first-divergence");
    expect(badge).toHaveLength(1);
    expect(badge[0].attrs["data-system"]).toBe("DETERMINATION");
    expect(byClass(node, "lineage-warning")).toHaveLength(1);
  });

  it("reports identical traces without a badge", () => {
    const payload: DiffPayload = {
      "first-divergence": null,
      "unit-differences": {},
    };
    const node = renderDiff(payload);
    expect(byClass(node, "first-divergence")).toHaveLength(0);
    expect(byClass(node, "identical")).toHaveLength(1);
  });
});
