// Browser entry point: wires the view model to the page. The service
// serves the built assets, so the API shares the page origin.

import { ApiClient } from "./api.js";
import { renderRegionGraph, renderResult, renderSePanel } from "./render.js";
import { mount } from "./vdom.js";
import { ViewModel } from "./viewmodel.js";

const REPLAY_STEP_MS = 300;

function clear(el: HTMLElement): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

async function openSystem(api: ApiClient, vm: ViewModel, name: string): Promise<void> {
  const panel = document.getElementById("system-panel");
  if (!panel) return;
  const { renderSystemView } = await import("./render.js");
  const system = await api.system(name);
  let path = null;
  if (vm.currentResultId && vm.selectedUnit) {
    try {
      path = await api.chooserPath(vm.currentResultId, vm.selectedUnit, name);
    } catch {
      path = null; // system not fired for this unit: no path badge
    }
  }
  clear(panel);
  mount(renderSystemView(system, path), panel);
}

function animateReplay(panel: HTMLElement): void {
  const steps = Array.from(panel.querySelectorAll<HTMLElement>(".replay-step"));
  let index = 0;
  let timer: ReturnType<typeof setInterval> | null = null;
  const advance = (): void => {
    if (index < steps.length) {
      steps[index].classList.add("active");
      index += 1;
    } else if (timer) {
      clearInterval(timer);
      timer = null;
    }
  };
  panel.querySelector(".play")?.addEventListener("click", () => {
    if (!timer) timer = setInterval(advance, REPLAY_STEP_MS);
  });
  panel.querySelector(".pause")?.addEventListener("click", () => {
    if (timer) {
      clearInterval(timer);
      timer = null;
    }
  });
  panel.querySelector(".step")?.addEventListener("click", advance);
}

async function start(): Promise<void> {
  const api = new ApiClient("");
  const vm = new ViewModel(api);
  const resultPane = document.getElementById("result");
  const sePane = document.getElementById("se-panel");
  const regionPane = document.getElementById("regions");
  const form = document.getElementById("spl-form") as HTMLFormElement | null;
  if (!resultPane || !sePane || !regionPane || !form) return;

  const showSe = async (bundleId: string): Promise<void> => {
    const payload = await vm.selectBundle(bundleId);
    clear(sePane);
    const node = renderSePanel(payload, (name) => void openSystem(api, vm, name));
    if (node) {
      mount(node, sePane);
      if (payload.view === "replay") animateReplay(sePane);
    }
  };

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const spl = (form.elements.namedItem("spl") as HTMLInputElement).value;
    const lang = (form.elements.namedItem("lang") as HTMLInputElement).value;
    const result = await vm.generate(spl, lang);
    clear(resultPane);
    mount(renderResult(result, (b) => void showSe(b)), resultPane);
  });

  const graph = await api.regionGraph();
  mount(
    renderRegionGraph(graph, (region) => void vm.openRegion(region)),
    regionPane,
  );
}

if (typeof document !== "undefined") {
  void start();
}
