import { SessionApi } from "./api.js";
import { ViewState, type ViewName } from "./state.js";
import { renderAdvisorView } from "./views/advisor.js";
import { renderLabelingView } from "./views/labeling.js";
import { renderModelView, renderRefinementDialog } from "./views/model.js";

const api = new SessionApi();
const state = new ViewState(api);

async function refresh(root: HTMLElement): Promise<void> {
  if (state.activeView === "labeling") {
    const [status, query] = await Promise.all([api.status(), api.query()]);
    let labels = null;
    let classified = null;
    try {
      [labels, classified] = await Promise.all([
        api.projection("labels"),
        api.projection("classification"),
      ]);
    } catch {
      // no model yet: the first iteration has no projections
    }
    renderLabelingView(root, state, status, query, labels, classified);
  } else if (state.activeView === "advisor") {
    try {
      const ranking = await api.ranking();
      renderAdvisorView(
        root, ranking, (override) => void doAdvance(root, override), api, state.lastError,
      );
    } catch {
      root.textContent = "no ranking yet: label items on both sides, then advance";
    }
  } else {
    try {
      const tree = await api.tree();
      renderModelView(root, state, tree, (nodeId, cell) => void drilldown(root, nodeId, cell));
    } catch {
      root.textContent = "no model yet: label items on both sides, then advance";
    }
  }
}

async function doAdvance(
  root: HTMLElement,
  override?: { descriptor: string; p: number },
): Promise<void> {
  try {
    await api.advance(override);
    state.activeView = "model";
  } catch (err) {
    state.lastError = String(err);
  }
  await refresh(root);
}

async function drilldown(root: HTMLElement, nodeId: string, cell: number): Promise<void> {
  const payload = await api.cellItems(nodeId, cell);
  const dialog = root.querySelector<HTMLElement>(".refinement-dialog");
  if (dialog) {
    renderRefinementDialog(dialog, state, payload);
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  const nav = document.getElementById("nav");
  if (!root || !nav) {
    throw new Error("missing #app / #nav containers");
  }
  for (const view of ["labeling", "advisor", "model"] as ViewName[]) {
    const btn = document.createElement("button");
    btn.textContent = view;
    btn.addEventListener("click", () => {
      state.activeView = view;
      void refresh(root);
    });
    nav.appendChild(btn);
  }
  // keyboard shortcuts: label the hovered card without opening the menu
  document.addEventListener("keydown", (ev) => {
    const hovered = document.querySelector<HTMLElement>(".item-card:hover");
    if (!hovered || !hovered.dataset.id) {
      return;
    }
    const map: Record<string, "relevant" | "neutral" | "irrelevant"> = {
      r: "relevant",
      n: "neutral",
      i: "irrelevant",
    };
    const label = map[ev.key];
    if (label) {
      state.stageLabel(hovered.dataset.id, label);
      hovered.dataset.staged = label;
    }
  });
  void refresh(root);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
