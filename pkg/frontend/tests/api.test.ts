import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, GeneratePayload } from "../src/api.js";
import { fixture, makeFakeFetch } from "./fixtures.js";

function client() {
  const { fetchFn, calls } = makeFakeFetch();
  return { api: new ApiClient("", fetchFn), calls };
}

describe("ApiClient", () => {
  it("posts /generate and returns the payload unchanged", async () => {
    const { api, calls } = client();
    const payload = await api.generate("(e / chase :actor (c / cat) :actee (m / mouse))", "en");
    expect(payload).toEqual(fixture<GeneratePayload>("generate-declarative"));
    expect(calls).toEqual(["POST /generate"]);
  });

  it("builds view-specific SE urls", async () => {
    const { api, calls } = client();
    await api.selectionExpression("r0", "u0", "replay");
    await api.selectionExpression("r0", "u0", "subgraph");
    expect(calls).toEqual([
      "GET /result/r0/unit/u0/se?view=replay",
      "GET /result/r0/unit/u0/se?view=subgraph",
    ]);
  });

  it("fetches the region graph and region views", async () => {
    const { api } = client();
    const graph = await api.regionGraph();
    expect(graph.nodes).toEqual(["MOOD", "NOMINAL-GROUP", "THEME", "TRANSITIVITY"]);
    const view = await api.regionView("THEME");
    expect(view.systems).toHaveLength(3);
  });

  it("raises ApiError with status and body on failure", async () => {
    const { api } = client();
    await expect(api.system("GHOST")).rejects.toSatisfy((err: unknown) => {
      return err instanceof ApiError && err.status === 404;
    });
  });

  it("reports the chooser path for a fired system", async () => {
    const { api } = client();
    const path = await api.chooserPath("r0", "u0", "MOOD-TYPE");
    expect(path.feature).toBe("declarative");
    expect(path.path[0].inquiry).toBe("command-query");
  });
});
