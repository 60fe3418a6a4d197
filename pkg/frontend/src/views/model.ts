import { encodeCell } from "../color.js";
import type { LayerName, ViewState } from "../state.js";
import type { CellItemsPayload, TreeNodeJson, TreePayload } from "../types.js";

export type CellDrilldown = (nodeId: string, cell: number) => void;

function heatColor(value: number, max: number): string {
  const t = max > 0 ? Math.min(1, value / max) : 0;
  const shade = Math.round(240 - t * 200);
  return `rgb(${shade},${shade},255)`;
}

function renderLayer(
  layer: LayerName,
  node: TreeNodeJson,
  tree: TreePayload,
  cell: number,
): HTMLElement | null {
  const box = document.createElement("div");
  box.className = `layer layer-${layer}`;
  if (layer === "label-quality") {
    const enc = encodeCell(
      node.layers.label_quality[cell],
      node.stats[cell].label_ratio,
      tree.q_t,
      String(cell) in node.children,
    );
    box.style.background = enc.color;
    if (enc.whiteDot) {
      const dot = document.createElement("span");
      dot.className = "white-dot";
      box.appendChild(dot);
    }
    return box;
  }
  if (layer === "u-matrix") {
    const max = Math.max(...node.layers.u_matrix, 0);
    box.style.background = heatColor(node.layers.u_matrix[cell], max);
    box.textContent = node.layers.u_matrix[cell].toFixed(3);
    return box;
  }
  if (layer === "qe") {
    const max = Math.max(...node.layers.quantization_error, 0);
    box.style.background = heatColor(node.layers.quantization_error[cell], max);
    box.textContent = node.layers.quantization_error[cell].toFixed(3);
    return box;
  }
  // feature-histogram: tiny bar chart of the prototype vector (needs ?full=1)
  const histogram = node.layers.feature_histogram?.[cell];
  if (!histogram) {
    return null;
  }
  const peak = Math.max(...histogram.map(Math.abs), 1e-12);
  for (const value of histogram.slice(0, 48)) {
    const bar = document.createElement("i");
    bar.className = "hist-bar";
    bar.style.height = `${Math.abs(value) / peak * 100}%`;
    box.appendChild(bar);
  }
  return box;
}

function renderNodeGrid(
  tree: TreePayload,
  nodeId: string,
  state: ViewState,
  onDrilldown: CellDrilldown,
): HTMLElement {
  const node = tree.nodes[nodeId];
  const grid = document.createElement("div");
  grid.className = "som-grid";
  grid.dataset.node = nodeId;
  grid.style.gridTemplateColumns = `repeat(${node.width}, 1fr)`;

  for (let cell = 0; cell < node.width * node.height; cell++) {
    const box = document.createElement("div");
    box.className = "som-cell";
    box.dataset.cell = String(cell);
    const stats = node.stats[cell];
    box.title =
      `${stats.n_items} items, ${stats.n_pos}+/${stats.n_neg}-, ` +
      `mix ${stats.mix_ratio.toFixed(2)}, labeled ${stats.label_ratio.toFixed(2)}`;
    // stackable layers in the user-defined order, later entries on top
    for (const layer of state.enabledLayers) {
      const rendered = renderLayer(layer, node, tree, cell);
      if (rendered) {
        box.appendChild(rendered);
      }
    }
    if (String(cell) in node.children) {
      const marker = document.createElement("span");
      marker.className = "child-marker";
      marker.textContent = "v";
      marker.title = `child SOM ${node.children[String(cell)]}`;
      box.appendChild(marker);
    }
    box.addEventListener("click", () => onDrilldown(nodeId, cell));
    grid.appendChild(box);
  }
  return grid;
}

/**
 * The model view: the classifier tree with the active node bordered and its
 * parent marked, the stacked per-cell layers, and a drill-down slot that the
 * refinement dialog fills with a cell's items.
 */
export function renderModelView(
  root: HTMLElement,
  state: ViewState,
  tree: TreePayload,
  onDrilldown: CellDrilldown,
): void {
  root.innerHTML = "";
  root.className = "view model-view";
  const active = state.selectedNode && tree.nodes[state.selectedNode] ? state.selectedNode : tree.root;
  const parentRef = tree.nodes[active].parent;

  const controls = document.createElement("div");
  controls.className = "layer-controls";
  for (const layer of ["label-quality", "feature-histogram", "u-matrix", "qe"] as LayerName[]) {
    const btn = document.createElement("button");
    btn.textContent = layer;
    btn.dataset.layer = layer;
    btn.dataset.enabled = String(state.enabledLayers.includes(layer));
    btn.addEventListener("click", () => state.toggleLayer(layer));
    controls.appendChild(btn);
  }
  root.appendChild(controls);

  const treeBox = document.createElement("div");
  treeBox.className = "classifier-tree";
  for (const nodeId of Object.keys(tree.nodes).sort()) {
    const wrap = document.createElement("div");
    wrap.className = "tree-node";
    wrap.dataset.node = nodeId;
    wrap.dataset.depth = String(tree.nodes[nodeId].depth);
    if (nodeId === active) {
      wrap.classList.add("active-node");
    }
    if (parentRef && nodeId === parentRef[0]) {
      wrap.classList.add("parent-node");
      const dot = document.createElement("span");
      dot.className = "parent-dot";
      wrap.appendChild(dot);
    }
    wrap.appendChild(renderNodeGrid(tree, nodeId, state, onDrilldown));
    wrap.addEventListener("click", (ev) => {
      if (ev.target === wrap) {
        state.selectedNode = nodeId;
      }
    });
    treeBox.appendChild(wrap);
  }
  root.appendChild(treeBox);

  const dialog = document.createElement("div");
  dialog.className = "refinement-dialog";
  dialog.hidden = true;
  root.appendChild(dialog);
}

/**
 * Details-on-demand for one cell: the assigned items with their labels and
 * classifications, plus inline relabeling that stages atomic edits.
 */
export function renderRefinementDialog(
  dialog: HTMLElement,
  state: ViewState,
  payload: CellItemsPayload,
): void {
  dialog.innerHTML = "";
  dialog.hidden = false;
  dialog.dataset.node = payload.node;
  dialog.dataset.cell = String(payload.cell);

  const heading = document.createElement("h3");
  heading.textContent = `node ${payload.node}, cell ${payload.cell}: ${payload.ids.length} items`;
  dialog.appendChild(heading);

  const list = document.createElement("ul");
  for (const id of payload.ids) {
    const row = document.createElement("li");
    row.dataset.id = id;
    const text = document.createElement("span");
    text.textContent = `${id}: labeled ${payload.labels[id]}, classified ${payload.classification[id] ?? "n/a"}`;
    row.appendChild(text);
    for (const label of ["relevant", "irrelevant", "neutral"] as const) {
      const btn = document.createElement("button");
      btn.textContent = label[0].toUpperCase();
      btn.dataset.label = label;
      btn.addEventListener("click", () => {
        state.stageLabel(id, label);
        row.dataset.staged = label;
      });
      row.appendChild(btn);
    }
    list.appendChild(row);
  }
  dialog.appendChild(list);

  const submit = document.createElement("button");
  submit.className = "submit-labels";
  submit.textContent = "submit labels";
  submit.addEventListener("click", () => void state.flushLabels());
  dialog.appendChild(submit);
}
