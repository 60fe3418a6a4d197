// Cell encodings for the model view. The gradient runs red (all labeled
// items irrelevant) over yellow (balanced mixture, MixRatio at its 0.5
// maximum) to green (all relevant). The inputs come from the API verbatim;
// only the mapping to pixels lives here.

export interface CellEncoding {
  color: string;
  whiteDot: boolean;
}

const RED: [number, number, number] = [211, 47, 47];
const YELLOW: [number, number, number] = [251, 192, 45];
const GREEN: [number, number, number] = [56, 142, 60];
export const UNLABELED_COLOR = "rgb(158,158,158)";

function mix(a: [number, number, number], b: [number, number, number], t: number): string {
  const ch = a.map((v, i) => Math.round(v + (b[i] - v) * t));
  return `rgb(${ch[0]},${ch[1]},${ch[2]})`;
}

/**
 * Map a label-quality scalar (0 = pure irrelevant, 0.5 = balanced,
 * 1 = pure relevant, null = no labels) to the red-yellow-green gradient.
 */
export function qualityColor(quality: number | null): string {
  if (quality === null) {
    return UNLABELED_COLOR;
  }
  const q = Math.min(1, Math.max(0, quality));
  return q <= 0.5 ? mix(RED, YELLOW, q / 0.5) : mix(YELLOW, GREEN, (q - 0.5) / 0.5);
}

/**
 * Full cell encoding. The white dot marks childless cells whose labeled
 * fraction sits below the threshold supplied by the API.
 */
export function encodeCell(
  quality: number | null,
  labelRatio: number,
  qThreshold: number,
  hasChild: boolean,
): CellEncoding {
  return {
    color: qualityColor(quality),
    whiteDot: !hasChild && labelRatio < qThreshold,
  };
}
