import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, SeListPayload } from "../src/api.js";
import { ViewModel } from "../src/viewmodel.js";
import { makeFakeFetch } from "./fixtures.js";

const CHASE = "(e / chase :actor (c / cat) :actee (m / mouse))";

describe("ViewModel", () => {
  let vm: ViewModel;

  beforeEach(async () => {
    const { fetchFn } = makeFakeFetch();
    vm = new ViewModel(new ApiClient("", fetchFn));
    await vm.generate(CHASE, "en");
  });

  it("clicking each token opens the SE list of its owning unit", async () => {
    for (const token of vm.result!.tokens) {
      const payload = (await vm.selectBundle(token.bundle)) as SeListPayload;
      expect(payload.view).toBe("list");
      expect(payload.unit).toBe(token.unit);
      expect(vm.selectedUnit).toBe(token.unit);
      expect(payload.selection.length).toBeGreaterThan(0);
    }
  });

  it("resolves bundles strictly against the fetched structure", () => {
    expect(vm.unitForBundle("u1.b0")).toBe("u1");
    expect(vm.unitForBundle("u0.b1")).toBe("u0");
    expect(() => vm.unitForBundle("u9.b9")).toThrow(/does not resolve/);
  });

  it("persists the view mode per constituent", async () => {
    vm.setViewMode("u0", "replay");
    const clause = await vm.selectUnit("u0");
    expect(clause.view).toBe("replay");
    // a different constituent keeps its own default
    const subject = await vm.selectUnit("u1");
    expect(subject.view).toBe("list");
    // and the clause's choice survives reselection
    const again = await vm.selectUnit("u0");
    expect(again.view).toBe("replay");
  });

  it("edit-regenerate returns the new string and the first divergence", async () => {
    const outcome = await vm.submitEdit({
      kind: "chooser",
      name: "determination-chooser",
      after: { name: "determination-chooser" },
    });
    expect(outcome.result.string).toBe("A cat chases a mouse.");
    expect(outcome.diff["first-divergence"]?.system).toBe("DETERMINATION");
    expect(vm.pendingEdits).toBe(1);
    expect(vm.currentResultId).toBe(outcome.result.result_id);
  });

  it("openRegion sets the active region and returns its view", async () => {
    const view = await vm.openRegion("THEME");
    expect(vm.activeRegion).toBe("THEME");
    expect(view.systems.map((s) => s.name)).toContain("THEME-MARKEDNESS");
  });
});
