import type {
  AdvanceResponse,
  CellItemsPayload,
  Label,
  ProjectionPayload,
  QueryPayload,
  RankingPayload,
  Status,
  TreePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  if (!resp.ok) {
    throw new ApiError(resp.status, await resp.text());
  }
  return (await resp.json()) as T;
}

export class SessionApi {
  constructor(private base: string = "") {}

  url(path: string): string {
    return this.base + path;
  }

  status(): Promise<Status> {
    return getJson(this.url("/api/session/status"));
  }

  query(): Promise<QueryPayload> {
    return getJson(this.url("/api/query"));
  }

  ranking(): Promise<RankingPayload> {
    return getJson(this.url("/api/advisor/ranking"));
  }

  tree(): Promise<TreePayload> {
    return getJson(this.url("/api/model/tree"));
  }

  projection(overlay: "labels" | "classification"): Promise<ProjectionPayload> {
    return getJson(this.url(`/api/projection?overlay=${overlay}`));
  }

  measureThumbnail(ref: string): Promise<ProjectionPayload> {
    return getJson(this.url(ref));
  }

  cellItems(nodeId: string, cell: number): Promise<CellItemsPayload> {
    return getJson(this.url(`/api/model/node/${nodeId}/cell/${cell}/items`));
  }

  // One POST carrying the whole batch: the server applies all assignments or
  // none, so a transport failure leaves its state untouched.
  async submitLabels(assignments: Record<string, Label>): Promise<Status> {
    const resp = await fetch(this.url("/api/labels"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ assignments }),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.text());
    }
    return (await resp.json()) as Status;
  }

  async advance(override?: { descriptor: string; p: number }): Promise<AdvanceResponse> {
    const resp = await fetch(this.url("/api/advance"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(override ? { override } : {}),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.text());
    }
    return (await resp.json()) as AdvanceResponse;
  }
}
