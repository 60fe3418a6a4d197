import type { ProjectionPayload, ProjectionPoint } from "./types.js";

const LABEL_COLORS: Record<string, string> = {
  relevant: "#388e3c",
  irrelevant: "#d32f2f",
  neutral: "#9e9e9e",
};

const CLASSIFIED_COLORS: Record<string, string> = {
  relevant: "#81c784",
  irrelevant: "#e57373",
  unclassified: "#bdbdbd",
};

function pointColor(point: ProjectionPoint, mode: "labels" | "classification"): string {
  if (mode === "classification") {
    return CLASSIFIED_COLORS[point.classified ?? "unclassified"] ?? CLASSIFIED_COLORS.unclassified;
  }
  return LABEL_COLORS[point.label] ?? LABEL_COLORS.neutral;
}

/**
 * Static SVG scatter plot of an embedding; points carry their category as a
 * data attribute so the two overlay plots can be compared cell by cell.
 */
export function renderScatter(
  projection: ProjectionPayload,
  mode: "labels" | "classification",
  size = 240,
): SVGSVGElement {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));
  svg.setAttribute("class", `scatter scatter-${mode}`);
  svg.dataset.stress = String(projection.stress);

  const xs = projection.points.map((p) => p.x);
  const ys = projection.points.map((p) => p.y);
  const xMin = Math.min(...xs, 0);
  const xMax = Math.max(...xs, 0);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys, 0);
  const spanX = xMax - xMin || 1;
  const spanY = yMax - yMin || 1;
  const pad = 8;

  for (const point of projection.points) {
    const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    circle.setAttribute("cx", String(pad + ((point.x - xMin) / spanX) * (size - 2 * pad)));
    circle.setAttribute("cy", String(pad + ((point.y - yMin) / spanY) * (size - 2 * pad)));
    circle.setAttribute("r", "3");
    circle.setAttribute("fill", pointColor(point, mode));
    circle.dataset.id = point.id;
    circle.dataset.label = point.label;
    if (point.classified !== null) {
      circle.dataset.classified = point.classified;
    }
    svg.appendChild(circle);
  }
  return svg;
}
