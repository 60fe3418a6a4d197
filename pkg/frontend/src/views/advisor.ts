import { renderScatter } from "../scatter.js";
import type { SessionApi } from "../api.js";
import type { MeasureEntry, ProjectionPayload, RankingPayload } from "../types.js";

export type AdvanceHandler = (override?: { descriptor: string; p: number }) => void;

function scoreBar(entry: MeasureEntry, best: number): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "score-bar";
  const fill = document.createElement("div");
  fill.className = "score-bar-fill";
  const width = best > 0 ? Math.max(0, (entry.score / best) * 100) : 0;
  fill.style.width = `${width}%`;
  bar.appendChild(fill);
  return bar;
}

/**
 * The advisor view: the ranked measures exactly in API order, a bar per
 * score, an embedding thumbnail per measure, and accept / override actions
 * that trigger one advance.
 */
export function renderAdvisorView(
  root: HTMLElement,
  ranking: RankingPayload,
  onAdvance: AdvanceHandler,
  api?: SessionApi,
  notice?: string | null,
): void {
  root.innerHTML = "";
  root.className = "view advisor-view";

  const heading = document.createElement("h2");
  heading.textContent = `measure ranking (iteration ${ranking.iteration}, ${ranking.active_metric})`;
  root.appendChild(heading);

  if (notice) {
    const prompt = document.createElement("div");
    prompt.className = "advance-notice";
    prompt.textContent = notice;
    root.appendChild(prompt);
  }

  const accept = document.createElement("button");
  accept.className = "accept-top";
  accept.textContent = "accept top measure";
  accept.addEventListener("click", () => onAdvance());
  root.appendChild(accept);

  const list = document.createElement("ol");
  list.className = "ranking";
  const best = ranking.measures.length ? ranking.measures[0].score : 0;

  // no client-side re-sort: rows appear exactly in API order
  for (const entry of ranking.measures) {
    const row = document.createElement("li");
    row.className = "measure-row";
    row.dataset.rank = String(entry.rank);
    row.dataset.descriptor = entry.descriptor;
    row.dataset.p = String(entry.p);
    if (entry.degenerate) {
      row.dataset.degenerate = "true";
    }

    const name = document.createElement("span");
    name.className = "measure-name";
    name.textContent = `${entry.descriptor} L${entry.p}`;
    row.appendChild(name);

    const score = document.createElement("span");
    score.className = "measure-score";
    score.textContent = entry.score.toFixed(4);
    row.appendChild(score);

    row.appendChild(scoreBar(entry, best));

    if (entry.embedding && api) {
      const thumb = document.createElement("div");
      thumb.className = "measure-thumb";
      thumb.dataset.ref = entry.embedding;
      row.appendChild(thumb);
      void api
        .measureThumbnail(entry.embedding)
        .then((projection: ProjectionPayload) => {
          thumb.appendChild(renderScatter(projection, "labels", 80));
        })
        .catch(() => {
          thumb.textContent = "(thumbnail unavailable)";
        });
    }

    row.addEventListener("click", () =>
      onAdvance({ descriptor: entry.descriptor, p: entry.p }),
    );
    list.appendChild(row);
  }
  root.appendChild(list);
}
