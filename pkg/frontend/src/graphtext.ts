/**
 * Parsing of the canonical graph text served by the backend, and derivation of
 * step-plot data from it. Every number shown in the UI comes from a served
 * text; there is no client-side model math beyond these plotting transforms.
 */

export type FeatureKind = "continuous" | "categorical" | "boolean";

export interface GraphBins {
  featureName: string;
  kind: FeatureKind;
  /** the served object keys, verbatim: interval strings or category labels */
  keys: string[];
  /** interval edges for continuous graphs (bins + 1 entries) */
  edges: number[];
  /** category labels for categorical/boolean graphs */
  categories: string[];
  means: number[];
  lower: number[];
  upper: number[];
}

const MEANS = "Means";
const LOWER = "Lower Bounds (95%-Confidence Interval)";
const UPPER = "Upper Bounds (95%-Confidence Interval)";
const INTERVAL_KEY = /^\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)$/;

export class GraphTextError extends Error {}

function parseObject(label: string, raw: string): Map<string, number> {
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch (err) {
    throw new GraphTextError(`${label}: invalid JSON object (${err})`);
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    throw new GraphTextError(`${label}: expected a JSON object`);
  }
  const out = new Map<string, number>();
  for (const [key, value] of Object.entries(parsed as Record<string, unknown>)) {
    if (typeof value !== "number" || !Number.isFinite(value)) {
      throw new GraphTextError(`${label}: value for ${key} is not a number`);
    }
    out.set(key, value);
  }
  if (out.size === 0) throw new GraphTextError(`${label}: empty object`);
  return out;
}

/** Parse the served canonical text into bins. Inverse of the server renderer. */
export function parseGraphText(text: string): GraphBins {
  const fields = new Map<string, string>();
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const sep = line.indexOf(": ");
    if (sep < 0) throw new GraphTextError(`unrecognized line: ${line}`);
    const label = line.slice(0, sep);
    if (fields.has(label)) throw new GraphTextError(`duplicate field ${label}`);
    fields.set(label, line.slice(sep + 2));
  }
  for (const required of ["Feature Name", "Feature Type", MEANS]) {
    if (!fields.has(required)) {
      throw new GraphTextError(`missing '${required}:' line`);
    }
  }
  const kind = fields.get("Feature Type") as FeatureKind;
  if (!["continuous", "categorical", "boolean"].includes(kind)) {
    throw new GraphTextError(`unknown feature type ${kind}`);
  }

  const meansObj = parseObject(MEANS, fields.get(MEANS)!);
  const keys = [...meansObj.keys()];
  const readAligned = (label: string): number[] => {
    if (!fields.has(label)) return keys.map((k) => meansObj.get(k)!);
    const obj = parseObject(label, fields.get(label)!);
    const objKeys = [...obj.keys()];
    if (objKeys.length !== keys.length || objKeys.some((k, i) => k !== keys[i])) {
      throw new GraphTextError(`mismatched axes: ${label} keys differ from Means`);
    }
    return keys.map((k) => obj.get(k)!);
  };

  const means = keys.map((k) => meansObj.get(k)!);
  const lower = readAligned(LOWER);
  const upper = readAligned(UPPER);

  const edges: number[] = [];
  const categories: string[] = [];
  if (kind === "continuous") {
    let prevHi: number | null = null;
    for (const key of keys) {
      const match = INTERVAL_KEY.exec(key);
      if (!match) throw new GraphTextError(`malformed interval key ${key}`);
      const lo = Number(match[1]);
      const hi = Number(match[2]);
      if (!Number.isFinite(lo) || !Number.isFinite(hi) || lo >= hi) {
        throw new GraphTextError(`bad interval ${key}`);
      }
      if (prevHi !== null && lo !== prevHi) {
        throw new GraphTextError(`gap in axis between ${prevHi} and ${lo}`);
      }
      edges.push(lo);
      prevHi = hi;
    }
    edges.push(prevHi!);
  } else {
    categories.push(...keys);
  }

  return {
    featureName: fields.get("Feature Name")!,
    kind,
    keys,
    edges,
    categories,
    means,
    lower,
    upper,
  };
}

/** One horizontal step of the plotted function, with its CI band. */
export interface Step {
  x0: number;
  x1: number;
  y: number;
  lo: number;
  hi: number;
  label: string;
}

export interface GraphPlotData {
  featureName: string;
  kind: FeatureKind;
  steps: Step[];
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

/** Derive step-plot data from served graph text (the only data source). */
export function plotDataFromText(text: string): GraphPlotData {
  const bins = parseGraphText(text);
  const steps: Step[] = bins.means.map((y, i) => {
    const continuous = bins.kind === "continuous";
    return {
      x0: continuous ? bins.edges[i] : i,
      x1: continuous ? bins.edges[i + 1] : i + 1,
      y,
      lo: bins.lower[i],
      hi: bins.upper[i],
      label: bins.keys[i], // the served key, verbatim
    };
  });
  const los = steps.map((s) => s.lo);
  const his = steps.map((s) => s.hi);
  return {
    featureName: bins.featureName,
    kind: bins.kind,
    steps,
    xMin: steps[0].x0,
    xMax: steps[steps.length - 1].x1,
    yMin: Math.min(...los, 0),
    yMax: Math.max(...his, 0),
  };
}

/** Dev-mode consistency check: plot data must re-derive to the served bins. */
export function plotMatchesText(data: GraphPlotData, text: string): boolean {
  const bins = parseGraphText(text);
  if (data.steps.length !== bins.means.length) return false;
  return data.steps.every(
    (s, i) => s.y === bins.means[i] && s.lo === bins.lower[i] && s.hi === bins.upper[i],
  );
}
