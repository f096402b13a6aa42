import type {
  CreateResponse,
  FeatureView,
  ForestView,
  HistoryView,
  Operation,
  OpResponse,
  PurityView,
  TreeView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
    public detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function asError(resp: Response): Promise<ApiError> {
  let code = "internal";
  let message = `HTTP ${resp.status}`;
  let detail: unknown = null;
  try {
    const body = (await resp.json()) as { error?: { code?: string; message?: string; detail?: unknown } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
      detail = body.error.detail ?? null;
    }
  } catch {
    // non-JSON error body: keep the status-line message
  }
  return new ApiError(code, message, resp.status, detail);
}

/** Thin client over the documented endpoints; the only backend the UI touches. */
export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) throw await asError(resp);
    return (await resp.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listDatasets(): Promise<{ datasets: string[] }> {
    return this.request("/datasets");
  }

  createSession(body: Record<string, unknown>): Promise<CreateResponse> {
    return this.post("/sessions", body);
  }

  featureView(sid: string): Promise<FeatureView> {
    return this.request(`/sessions/${sid}/views/feature`);
  }

  forestView(sid: string): Promise<ForestView> {
    return this.request(`/sessions/${sid}/views/forest`);
  }

  treeView(sid: string, tree: number): Promise<TreeView> {
    return this.request(`/sessions/${sid}/views/tree/${tree}`);
  }

  purityView(sid: string, tree: number, leaf: number): Promise<PurityView> {
    return this.request(`/sessions/${sid}/views/path-purity?tree=${tree}&leaf=${leaf}`);
  }

  historyView(sid: string): Promise<HistoryView> {
    return this.request(`/sessions/${sid}/views/history`);
  }

  postOp(sid: string, op: Operation): Promise<OpResponse> {
    return this.post(`/sessions/${sid}/ops`, op);
  }

  exportSession(sid: string): Promise<unknown> {
    return this.request(`/sessions/${sid}/export`);
  }
}
