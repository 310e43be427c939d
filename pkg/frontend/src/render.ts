// Pure rendering: payloads in, virtual-node trees out. All linguistic
// content comes verbatim from the service payloads.

import {
  ChooserPathPayload,
  DiffPayload,
  GeneratePayload,
  RegionGraphPayload,
  SeListPayload,
  SePayload,
  SeReplayPayload,
  SeSubgraphPayload,
  StructureNode,
  SystemPayload,
} from "./api.js";
import { VNode, h } from "./vdom.js";

export type SelectHandler = (bundleId: string) => void;

// ---------------------------------------------------------------------------
// Generated string and structure tree

export function renderResult(payload: GeneratePayload, onSelect: SelectHandler): VNode {
  const children: VNode[] = [];
  if (payload.status !== "complete") {
    children.push(
      h("div", { class: "banner partial" }, [
        `generation incomplete (${payload.status})`,
      ]),
    );
  }
  const tokens = payload.tokens.map((t, i) => {
    const classes = ["token"];
    if (payload.status !== "complete" && t.text.startsWith("<")) {
      classes.push("placeholder");
    }
    return h(
      "span",
      { class: classes.join(" "), "data-bundle": t.bundle, "data-index": String(i) },
      [t.text],
      () => onSelect(t.bundle),
    );
  });
  children.push(h("p", { class: "result-string" }, tokens));
  children.push(renderStructure(payload.structure, onSelect));
  return h("section", { class: "result" }, children);
}

function renderStructure(node: StructureNode, onSelect: SelectHandler): VNode {
  const items = node.constituents.map((c) => {
    const label = h(
      "span",
      { class: "tree-node", "data-bundle": c.bundle },
      [c.functions.join("/")],
      () => onSelect(c.bundle),
    );
    const children: (VNode | string)[] = [label];
    if (c.unit) {
      children.push(renderStructure(c.unit, onSelect));
    } else if (c.token !== undefined) {
      children.push(h("span", { class: "leaf-token" }, [c.token]));
    }
    return h("li", { class: "constituent" }, children);
  });
  return h("ul", { class: "structure", "data-unit": node.unit }, items);
}

// ---------------------------------------------------------------------------
// Selection-expression panel (three view modes)

export function renderSePanel(
  payload: SePayload,
  onOpenSystem: (name: string) => void,
): VNode | null {
  switch (payload.view) {
    case "list":
      return renderSeList(payload, onOpenSystem);
    case "replay":
      return renderSeReplay(payload);
    case "subgraph":
      return renderSeSubgraph(payload);
  }
}

function renderSeList(
  payload: SeListPayload,
  onOpenSystem: (name: string) => void,
): VNode | null {
  if (payload.selection.length === 0) {
    return null; // empty selection: panel hidden
  }
  const items = payload.selection.map((entry) => {
    const attrs = { class: "se-entry", "data-feature": entry.feature };
    if (entry.system === null) {
      return h("li", attrs, [entry.feature]);
    }
    return h(
      "li",
      { ...attrs, "data-system": entry.system },
      [`${entry.feature} (${entry.system})`],
      () => onOpenSystem(entry.system!),
    );
  });
  return h("ul", { class: "se-list", "data-unit": payload.unit }, items);
}

function renderSeReplay(payload: SeReplayPayload): VNode {
  const steps = payload.events.map((event) =>
    h(
      "li",
      { class: "replay-step", "data-seq": String(event.seq), "data-system": event.system },
      [`${event.system} -> ${event.feature}`],
    ),
  );
  const controls = h("div", { class: "replay-controls" }, [
    h("button", { class: "play" }, ["play"]),
    h("button", { class: "pause" }, ["pause"]),
    h("button", { class: "step" }, ["step"]),
  ]);
  return h("div", { class: "se-replay", "data-unit": payload.unit }, [
    controls,
    h("ol", { class: "replay-steps" }, steps),
  ]);
}

function renderSeSubgraph(payload: SeSubgraphPayload): VNode {
  const chosen = new Set(payload.chosen);
  const systems = payload.systems.map((system) =>
    h("div", { class: "lattice-system", "data-system": system.name }, [
      h("span", { class: "system-name" }, [system.name]),
      h(
        "span",
        { class: "features" },
        system.outputs.map((feature) =>
          h(
            "span",
            {
              class: chosen.has(feature) ? "feature chosen" : "feature",
              "data-feature": feature,
            },
            [feature],
          ),
        ),
      ),
    ]),
  );
  return h("div", { class: "se-subgraph", "data-unit": payload.unit }, systems);
}

// ---------------------------------------------------------------------------
// System view

export function renderSystemView(
  payload: SystemPayload,
  chooserPath: ChooserPathPayload | null,
): VNode {
  const children: VNode[] = [
    // paradigmatic context sits before (left of) the disjunction itself
    h("span", { class: "context" }, [payload.context]),
    h("h2", { class: "system-name" }, [payload.name]),
  ];
  if (chooserPath) {
    children.push(
      h(
        "span",
        { class: "chooser-path-badge", "data-feature": chooserPath.feature },
        [chooserPath.path.map((s) => `${s.inquiry}=${s.answer}`).join(" ; ")],
      ),
    );
  }
  const outputs = payload.outputs.map((output) =>
    h("li", { class: "output", "data-feature": output.feature }, [
      h("span", { class: "feature" }, [output.feature]),
      h(
        "ul",
        { class: "realizations" },
        output.realizations.map((r) =>
          h("li", { class: "realization", "data-op": r.op }, [
            `${r.op} ${r.function ?? ""}`.trim(),
          ]),
        ),
      ),
    ]),
  );
  children.push(h("ul", { class: "outputs" }, outputs));
  return h("section", { class: "system-view", "data-system": payload.name }, children);
}

// ---------------------------------------------------------------------------
// Region graph as a menu

export function renderRegionGraph(
  payload: RegionGraphPayload,
  onOpen: (region: string) => void,
): VNode {
  const nodes = payload.nodes.map((region) =>
    h(
      "button",
      { class: "region-node", "data-region": region },
      [region],
      () => onOpen(region),
    ),
  );
  const edges = payload.edges.map((edge) =>
    h("li", { class: "region-edge" }, [`${edge.from} -> ${edge.to} (${edge.weight})`]),
  );
  return h("section", { class: "region-graph" }, [
    h("div", { class: "region-nodes" }, nodes),
    h("ul", { class: "region-edges" }, edges),
  ]);
}

// ---------------------------------------------------------------------------
// Regenerate-and-diff

export function renderDiff(payload: DiffPayload): VNode {
  const children: VNode[] = [];
  const divergence = payload["first-divergence"];
  if (divergence === null) {
    children.push(h("p", { class: "identical" }, ["traces are identical"]));
  } else {
    children.push(
      h(
        "span",
        {
          class: "badge first-divergence",
          "data-system": divergence.system,
          "data-unit": divergence.unit,
        },
        [`${divergence.system}: ${divergence.a} -> ${divergence.b}`],
      ),
    );
  }
  const warning = payload["lineage-warning"];
  if (warning) {
    children.push(h("p", { class: "lineage-warning" }, [warning.message]));
  }
  const units = Object.entries(payload["unit-differences"]).map(([unit, d]) =>
    h("li", { class: "unit-diff", "data-unit": unit }, [
      `${unit}: -${d["only-a"].join(",")} +${d["only-b"].join(",")}`,
    ]),
  );
  children.push(h("ul", { class: "unit-diffs" }, units));
  return h("section", { class: "trace-diff" }, children);
}
