import { renderScatter } from "../scatter.js";
import type { ViewState } from "../state.js";
import type { Label, ProjectionPayload, QueryPayload, Status } from "../types.js";

const PANELS: Label[] = ["relevant", "neutral", "irrelevant"];

function statusLine(status: Status): string {
  const measure =
    status.descriptor === null ? "none yet" : `${status.descriptor} (L${status.p})`;
  return (
    `iteration ${status.iteration} | measure: ${measure} | ` +
    `${status.relevant} relevant / ${status.irrelevant} irrelevant / ` +
    `${status.neutral} neutral | phase ${status.phase}`
  );
}

function itemCard(state: ViewState, id: string, thumbnail: string | undefined): HTMLElement {
  const card = document.createElement("div");
  card.className = "item-card";
  card.dataset.id = id;
  if (thumbnail) {
    const img = document.createElement("img");
    img.src = thumbnail;
    img.loading = "lazy";
    card.appendChild(img);
  }
  const caption = document.createElement("span");
  caption.textContent = id;
  card.appendChild(caption);

  const menu = document.createElement("div");
  menu.className = "label-menu";
  for (const label of PANELS) {
    const btn = document.createElement("button");
    btn.textContent = label[0].toUpperCase();
    btn.title = label;
    btn.dataset.label = label;
    btn.addEventListener("click", () => {
      state.stageLabel(id, label);
      card.dataset.staged = label;
    });
    menu.appendChild(btn);
  }
  card.appendChild(menu);
  return card;
}

/**
 * The relevance-feedback view: status display, the three label panels
 * (relevant / neutral / irrelevant, top to bottom), the queried items, and
 * the two MDS scatter plots whose disagreement shows labeling impact.
 */
export function renderLabelingView(
  root: HTMLElement,
  state: ViewState,
  status: Status,
  query: QueryPayload,
  labelsProjection: ProjectionPayload | null,
  classifiedProjection: ProjectionPayload | null,
): void {
  root.innerHTML = "";
  root.className = "view labeling-view";

  const statusBox = document.createElement("div");
  statusBox.className = "status-display";
  statusBox.textContent = statusLine(status);
  root.appendChild(statusBox);

  if (state.lastError) {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `submission failed, edits kept: ${state.lastError}`;
    const retry = document.createElement("button");
    retry.className = "retry";
    retry.textContent = "retry";
    retry.addEventListener("click", () => void state.flushLabels());
    banner.appendChild(retry);
    root.appendChild(banner);
  }

  const plots = document.createElement("div");
  plots.className = "impact-plots";
  if (labelsProjection) {
    const box = document.createElement("figure");
    box.className = "plot plot-labels";
    box.appendChild(renderScatter(labelsProjection, "labels"));
    const cap = document.createElement("figcaption");
    cap.textContent = "current labels";
    box.appendChild(cap);
    plots.appendChild(box);
  }
  if (classifiedProjection) {
    const box = document.createElement("figure");
    box.className = "plot plot-classification";
    box.appendChild(renderScatter(classifiedProjection, "classification"));
    const cap = document.createElement("figcaption");
    cap.textContent = "classification result";
    box.appendChild(cap);
    plots.appendChild(box);
  }
  root.appendChild(plots);

  for (const panel of PANELS) {
    const section = document.createElement("section");
    section.className = `panel panel-${panel}`;
    const heading = document.createElement("h3");
    heading.textContent = panel;
    section.appendChild(heading);
    const body = document.createElement("div");
    body.className = "panel-items";
    section.appendChild(body);
    root.appendChild(section);
  }

  const neutralPanel = root.querySelector(".panel-neutral .panel-items")!;
  for (const item of query.items) {
    const staged = state.pendingEdits.get(item.id);
    const effective = staged ?? item.label;
    const host = root.querySelector(`.panel-${effective} .panel-items`) ?? neutralPanel;
    const card = itemCard(state, item.id, item.thumbnail);
    if (staged) {
      card.dataset.staged = staged;
    }
    host.appendChild(card);
  }

  const submit = document.createElement("button");
  submit.className = "submit-labels";
  submit.textContent = `submit ${state.pendingEdits.size} labels`;
  submit.addEventListener("click", () => void state.flushLabels());
  root.appendChild(submit);
}
