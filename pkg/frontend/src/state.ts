import { ApiError, SessionApi } from "./api.js";
import type { Label, Status } from "./types.js";

export type ViewName = "labeling" | "advisor" | "model";
export type LayerName = "label-quality" | "feature-histogram" | "u-matrix" | "qe";

export const ALL_LAYERS: LayerName[] = ["label-quality", "feature-histogram", "u-matrix", "qe"];

// Client-side state: the active view, the node under inspection, the layer
// stack order, and label edits not yet flushed to the server.
export class ViewState {
  activeView: ViewName = "labeling";
  selectedNode: string | null = null;
  enabledLayers: LayerName[] = ["label-quality"];
  pendingEdits: Map<string, Label> = new Map();
  lastError: string | null = null;

  constructor(public api: SessionApi) {}

  stageLabel(id: string, label: Label): void {
    this.pendingEdits.set(id, label);
  }

  discardEdit(id: string): void {
    this.pendingEdits.delete(id);
  }

  toggleLayer(layer: LayerName): void {
    const at = this.enabledLayers.indexOf(layer);
    if (at >= 0) {
      this.enabledLayers.splice(at, 1);
    } else {
      this.enabledLayers.push(layer); // user-defined stacking order: last on top
    }
  }

  /**
   * Flush all pending edits in one atomic POST. On any failure the edits
   * stay pending (the server applied nothing), so a retry resubmits the
   * identical batch.
   */
  async flushLabels(): Promise<Status | null> {
    if (this.pendingEdits.size === 0) {
      return null;
    }
    const assignments: Record<string, Label> = {};
    for (const [id, label] of this.pendingEdits) {
      assignments[id] = label;
    }
    try {
      const status = await this.api.submitLabels(assignments);
      this.pendingEdits.clear();
      this.lastError = null;
      return status;
    } catch (err) {
      this.lastError = err instanceof ApiError ? err.message : String(err);
      return null;
    }
  }
}
