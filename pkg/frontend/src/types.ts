// Payload shapes of the session API. Field names mirror the server JSON
// verbatim; the UI never derives these numbers itself.

export type Label = "relevant" | "irrelevant" | "neutral";

export interface Status {
  iteration: number;
  phase: string;
  corpus_size: number;
  corpus_kind: string;
  descriptor: string | null;
  p: number | null;
  relevant: number;
  irrelevant: number;
  neutral: number;
  query_size: number;
}

export interface QueryItem {
  id: string;
  label: Label;
  thumbnail?: string;
}

export interface QueryPayload {
  ids: string[];
  items: QueryItem[];
}

export interface MeasureEntry {
  rank: number;
  descriptor: string;
  p: number;
  score: number;
  q_inter: number;
  q_intra_pos: number;
  q_intra_neg: number;
  degenerate: boolean;
  embedding?: string;
}

export interface RankingPayload {
  active_metric: string;
  iteration: number;
  measures: MeasureEntry[];
}

export interface CellStatsJson {
  n_items: number;
  n_pos: number;
  n_neg: number;
  mix_ratio: number;
  label_ratio: number;
  mean_qe: number;
}

export interface NodeLayersJson {
  label_quality: (number | null)[];
  insufficient: boolean[];
  quantization_error: number[];
  u_matrix: number[];
  feature_histogram?: number[][];
}

export interface TreeNodeJson {
  path: number[];
  depth: number;
  parent: [string, number] | null;
  children: Record<string, string>;
  width: number;
  height: number;
  stats: CellStatsJson[];
  layers: NodeLayersJson;
}

export interface TreePayload {
  root: string;
  p: number;
  descriptor: string;
  q_t: number;
  m_t: number;
  nodes: Record<string, TreeNodeJson>;
}

export interface ProjectionPoint {
  id: string;
  x: number;
  y: number;
  label: Label;
  classified: string | null;
}

export interface ProjectionPayload {
  measure: { descriptor: string; p: number };
  stress: number;
  degenerate: boolean;
  points: ProjectionPoint[];
}

export interface CellItemsPayload {
  node: string;
  cell: number;
  ids: string[];
  labels: Record<string, Label>;
  classification: Record<string, string | null>;
}

export interface AdvanceResponse {
  ranking: RankingPayload;
  treeId: string;
  queryIds: string[];
  selected: { descriptor: string; p: number };
  override: boolean;
}
