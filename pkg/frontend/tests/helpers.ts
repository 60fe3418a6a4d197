import { vi } from "vitest";
import type {
  ProjectionPayload,
  QueryPayload,
  RankingPayload,
  Status,
  TreePayload,
} from "../src/types.js";

export const STATUS: Status = {
  iteration: 3,
  phase: "ready",
  corpus_size: 200,
  corpus_kind: "images",
  descriptor: "haralick",
  p: 2.0,
  relevant: 41,
  irrelevant: 37,
  neutral: 122,
  query_size: 4,
};

export const QUERY: QueryPayload = {
  ids: ["q1", "q2", "q3", "q4"],
  items: [
    { id: "q1", label: "neutral", thumbnail: "/api/items/q1/thumbnail" },
    { id: "q2", label: "neutral", thumbnail: "/api/items/q2/thumbnail" },
    { id: "q3", label: "relevant", thumbnail: "/api/items/q3/thumbnail" },
    { id: "q4", label: "irrelevant", thumbnail: "/api/items/q4/thumbnail" },
  ],
};

export const RANKING: RankingPayload = {
  active_metric: "inter-only",
  iteration: 3,
  measures: [
    {
      rank: 0, descriptor: "haralick", p: 2.0, score: 0.8123,
      q_inter: 0.8123, q_intra_pos: 0.4, q_intra_neg: 0.3, degenerate: false,
      embedding: "/api/projection?overlay=labels&measure=haralick&p=2.0",
    },
    {
      rank: 1, descriptor: "tamura", p: 1.5, score: 0.61,
      q_inter: 0.61, q_intra_pos: 0.5, q_intra_neg: 0.2, degenerate: false,
      embedding: "/api/projection?overlay=labels&measure=tamura&p=1.5",
    },
    {
      rank: 2, descriptor: "blocks", p: 1.0, score: 0.0,
      q_inter: 0.0, q_intra_pos: 0.0, q_intra_neg: 0.0, degenerate: true,
      embedding: "/api/projection?overlay=labels&measure=blocks&p=1.0",
    },
  ],
};

// q_t = 0.25: cell 1 is childless and under-labeled (white dot); cell 2 has
// a child, so no dot even though its ratio is below the threshold.
export const TREE: TreePayload = {
  root: "root",
  p: 2.0,
  descriptor: "haralick",
  q_t: 0.25,
  m_t: 0.2,
  nodes: {
    root: {
      path: [],
      depth: 0,
      parent: null,
      children: { "2": "root/2" },
      width: 2,
      height: 2,
      stats: [
        { n_items: 50, n_pos: 10, n_neg: 0, mix_ratio: 0.0, label_ratio: 0.4, mean_qe: 0.10 },
        { n_items: 40, n_pos: 0, n_neg: 4, mix_ratio: 0.0, label_ratio: 0.1, mean_qe: 0.20 },
        { n_items: 80, n_pos: 9, n_neg: 9, mix_ratio: 0.5, label_ratio: 0.225, mean_qe: 0.15 },
        { n_items: 30, n_pos: 0, n_neg: 0, mix_ratio: 0.0, label_ratio: 0.0, mean_qe: 0.0 },
      ],
      layers: {
        label_quality: [1.0, 0.0, 0.5, null],
        insufficient: [false, true, true, true],
        quantization_error: [0.1, 0.2, 0.15, 0.0],
        u_matrix: [0.3, 0.28, 0.33, 0.31],
      },
    },
    "root/2": {
      path: [2],
      depth: 1,
      parent: ["root", 2],
      children: {},
      width: 2,
      height: 2,
      stats: [
        { n_items: 20, n_pos: 8, n_neg: 1, mix_ratio: 1 / 9, label_ratio: 0.45, mean_qe: 0.05 },
        { n_items: 20, n_pos: 1, n_neg: 7, mix_ratio: 0.125, label_ratio: 0.4, mean_qe: 0.06 },
        { n_items: 20, n_pos: 0, n_neg: 0, mix_ratio: 0.0, label_ratio: 0.0, mean_qe: 0.07 },
        { n_items: 20, n_pos: 2, n_neg: 2, mix_ratio: 0.5, label_ratio: 0.2, mean_qe: 0.08 },
      ],
      layers: {
        label_quality: [1 - 1 / 9, 0.125, null, 0.5],
        insufficient: [false, false, true, true],
        quantization_error: [0.05, 0.06, 0.07, 0.08],
        u_matrix: [0.2, 0.21, 0.22, 0.23],
      },
    },
  },
};

export const PROJECTION_LABELS: ProjectionPayload = {
  measure: { descriptor: "haralick", p: 2.0 },
  stress: 0.042,
  degenerate: false,
  points: [
    { id: "q1", x: 0.1, y: 0.2, label: "relevant", classified: null },
    { id: "q2", x: -0.4, y: 0.0, label: "neutral", classified: null },
  ],
};

export const PROJECTION_CLASSIFIED: ProjectionPayload = {
  measure: { descriptor: "haralick", p: 2.0 },
  stress: 0.042,
  degenerate: false,
  points: [
    { id: "q1", x: 0.1, y: 0.2, label: "relevant", classified: "irrelevant" },
    { id: "q2", x: -0.4, y: 0.0, label: "neutral", classified: "relevant" },
  ],
};

export interface FetchLogEntry {
  url: string;
  method: string;
  body: unknown;
}

/** Install a fetch mock serving canned payloads; returns the request log. */
export function mockFetch(
  routes: Record<string, unknown>,
  options: { failPosts?: boolean } = {},
): FetchLogEntry[] {
  const log: FetchLogEntry[] = [];
  vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    log.push({ url, method, body });
    if (method === "POST" && options.failPosts) {
      return new Response("injected failure", { status: 500 });
    }
    const path = url.split("#")[0];
    if (path in routes) {
      return new Response(JSON.stringify(routes[path]), {
        status: 200,
        headers: { "Content-Type": "application/json" },
      });
    }
    return new Response("not found", { status: 404 });
  });
  return log;
}
