// Typed client for the inspection service. This module is the only place
// the UI touches the network; everything displayed downstream is a direct
// projection of these payloads.

export interface ResourceVersion {
  base: string;
  patches: string[];
}

export interface StructureNode {
  unit: string;
  path: string;
  entity: string;
  constituents: ConstituentNode[];
}

export interface ConstituentNode {
  bundle: string;
  functions: string[];
  token?: string;
  "token-index"?: number;
  unit?: StructureNode;
}

export interface TokenInfo {
  text: string;
  bundle: string;
  unit: string;
}

export interface GeneratePayload {
  result_id: string;
  string: string;
  status: string;
  structure: StructureNode;
  tokens: TokenInfo[];
  units: string[];
  "resource-version": ResourceVersion;
}

export interface SeEntry {
  feature: string;
  system: string | null;
}

export interface SeListPayload {
  view: "list";
  unit: string;
  path: string;
  selection: SeEntry[];
}

export interface ReplayStep {
  seq: number;
  unit: string;
  system: string;
  feature: string;
  path: InquiryStep[];
  statements: string[];
}

export interface SeReplayPayload {
  view: "replay";
  unit: string;
  path: string;
  events: ReplayStep[];
}

export interface SubgraphSystem {
  name: string;
  region: string;
  entry: unknown;
  outputs: string[];
}

export interface SeSubgraphPayload {
  view: "subgraph";
  unit: string;
  path: string;
  systems: SubgraphSystem[];
  chosen: string[];
  boundary: unknown[];
}

export type SePayload = SeListPayload | SeReplayPayload | SeSubgraphPayload;
export type ViewMode = "list" | "replay" | "subgraph";

export interface InquiryStep {
  inquiry: string;
  bindings: Record<string, string>;
  answer: string;
}

export interface ChooserPathPayload {
  system: string;
  unit: string;
  feature: string;
  path: InquiryStep[];
}

export interface RealizationDoc {
  op: string;
  function?: string;
  [key: string]: unknown;
}

export interface SystemPayload {
  name: string;
  region: string;
  entry: unknown;
  context: string;
  chooser: string | null;
  outputs: { feature: string; realizations: RealizationDoc[] }[];
}

export interface RegionGraphPayload {
  nodes: string[];
  edges: { from: string; to: string; weight: number }[];
}

export interface RegionViewPayload {
  systems: SubgraphSystem[];
  boundary: {
    feature: string;
    from: string;
    "owner-region": string;
    "owner-system": string;
  }[];
}

export interface DiffPayload {
  "first-divergence": {
    unit: string;
    system: string;
    a: string;
    b: string;
  } | null;
  "unit-differences": Record<string, { "only-a": string[]; "only-b": string[] }>;
  "lineage-warning"?: { message: string; a: string; b: string };
}

export interface EditBody {
  kind: string;
  name: string;
  after: Record<string, unknown> | null;
  languages?: string[];
}

export interface SuiteRunPayload {
  suite: string;
  passed: number;
  failed: number;
  results: unknown;
  "coverage-gaps": string[];
}

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: unknown,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchFn = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload, `${init?.method ?? "GET"} ${path} -> ${response.status}`);
    }
    return payload as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  generate(spl: string, lang: string): Promise<GeneratePayload> {
    return this.post("/generate", { spl, lang });
  }

  selectionExpression(resultId: string, unit: string, view: ViewMode): Promise<SePayload> {
    return this.request(`/result/${resultId}/unit/${unit}/se?view=${view}`);
  }

  focus(resultId: string, unit: string, aspect: string): Promise<unknown> {
    return this.request(`/result/${resultId}/unit/${unit}/focus?aspect=${aspect}`);
  }

  chooserPath(resultId: string, unit: string, system: string): Promise<ChooserPathPayload> {
    return this.request(`/result/${resultId}/unit/${unit}/system/${system}/chooser-path`);
  }

  system(name: string): Promise<SystemPayload> {
    return this.request(`/system/${name}`);
  }

  lattice(focus: string, radius: number): Promise<unknown> {
    return this.request(`/lattice?focus=${encodeURIComponent(focus)}&radius=${radius}`);
  }

  regionGraph(): Promise<RegionGraphPayload> {
    return this.request("/regions/graph");
  }

  regionView(name: string): Promise<RegionViewPayload> {
    return this.request(`/regions/${name}/view`);
  }

  edit(body: EditBody): Promise<{ "pending-edits": number; "shadow-version": string }> {
    return this.post("/edit", body);
  }

  patchCreate(): Promise<unknown> {
    return this.post("/patch/create", {});
  }

  patchAccept(force: boolean): Promise<unknown> {
    return this.post("/patch/accept", { force });
  }

  runSuite(): Promise<SuiteRunPayload> {
    return this.post("/suite/run", {});
  }

  diff(a: string, b: string): Promise<DiffPayload> {
    return this.request(`/diff?a=${a}&b=${b}`);
  }
}
