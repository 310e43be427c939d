// Client-side state. The view model never computes linguistics: every fact
// it exposes is a fetched payload or an index into one.

import {
  ApiClient,
  DiffPayload,
  EditBody,
  GeneratePayload,
  SePayload,
  StructureNode,
  ViewMode,
} from "./api.js";

export interface EditOutcome {
  result: GeneratePayload;
  diff: DiffPayload;
}

export class ViewModel {
  result: GeneratePayload | null = null;
  selectedUnit: string | null = null;
  pendingEdits = 0;
  activeRegion: string | null = null;
  private lastSpl: string | null = null;
  private lastLang: string | null = null;
  private viewModes = new Map<string, ViewMode>();

  constructor(private readonly api: ApiClient) {}

  get currentResultId(): string | null {
    return this.result?.result_id ?? null;
  }

  async generate(spl: string, lang: string): Promise<GeneratePayload> {
    this.result = await this.api.generate(spl, lang);
    this.lastSpl = spl;
    this.lastLang = lang;
    this.selectedUnit = null;
    return this.result;
  }

  // The unit that owns a bundle, resolved strictly against the fetched
  // structure; an unknown bundle is a programming error, not a fetch.
  unitForBundle(bundleId: string): string {
    const structure = this.result?.structure;
    if (!structure) {
      throw new Error("no result fetched");
    }
    const walk = (node: StructureNode): string | null => {
      for (const c of node.constituents) {
        if (c.bundle === bundleId) return node.unit;
        if (c.unit) {
          const hit = walk(c.unit);
          if (hit) return hit;
        }
      }
      return null;
    };
    const unit = walk(structure);
    if (!unit) {
      throw new Error(`bundle ${bundleId} does not resolve against the structure`);
    }
    return unit;
  }

  viewModeFor(unit: string): ViewMode {
    return this.viewModes.get(unit) ?? "list";
  }

  setViewMode(unit: string, mode: ViewMode): void {
    this.viewModes.set(unit, mode);
  }

  // Token or tree-node click: select the owning constituent and fetch its
  // selection expression in that constituent's persisted view mode.
  async selectBundle(bundleId: string): Promise<SePayload> {
    const unit = this.unitForBundle(bundleId);
    return this.selectUnit(unit);
  }

  async selectUnit(unit: string): Promise<SePayload> {
    if (!this.result) {
      throw new Error("no result fetched");
    }
    this.selectedUnit = unit;
    return this.api.selectionExpression(
      this.result.result_id,
      unit,
      this.viewModeFor(unit),
    );
  }

  // The edit-regenerate-diff loop: submit, regenerate the same input,
  // and diff the new result against the one being debugged.
  async submitEdit(edit: EditBody): Promise<EditOutcome> {
    if (!this.result || this.lastSpl === null || this.lastLang === null) {
      throw new Error("no result to regenerate");
    }
    const previousId = this.result.result_id;
    const response = await this.api.edit(edit);
    this.pendingEdits = response["pending-edits"];
    const regenerated = await this.api.generate(this.lastSpl, this.lastLang);
    this.result = regenerated;
    const diff = await this.api.diff(previousId, regenerated.result_id);
    return { result: regenerated, diff };
  }

  async openRegion(name: string) {
    this.activeRegion = name;
    return this.api.regionView(name);
  }
}
