/**
 * SVG step plot of a piecewise-constant shape function with its CI band.
 * Pure string construction so the output is testable without a DOM; the
 * underlying functions are piecewise constant, so steps, not smooth curves.
 */

import type { GraphPlotData, Step } from "./graphtext.js";

export interface PlotOptions {
  width: number;
  height: number;
  margin: number;
}

const DEFAULTS: PlotOptions = { width: 640, height: 320, margin: 36 };

function scales(data: GraphPlotData, opts: PlotOptions) {
  const innerW = opts.width - 2 * opts.margin;
  const innerH = opts.height - 2 * opts.margin;
  const spanX = data.xMax - data.xMin || 1;
  const spanY = data.yMax - data.yMin || 1;
  const padY = spanY * 0.05;
  const y0 = data.yMin - padY;
  const y1 = data.yMax + padY;
  return {
    x: (v: number) => opts.margin + ((v - data.xMin) / spanX) * innerW,
    y: (v: number) => opts.margin + ((y1 - v) / (y1 - y0)) * innerH,
  };
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

/** Path of the step function: one horizontal segment per bin, connected. */
export function stepPath(steps: Step[], x: (v: number) => number, y: (v: number) => number): string {
  const parts: string[] = [];
  steps.forEach((s, i) => {
    const command = i === 0 ? `M ${x(s.x0)} ${y(s.y)}` : `L ${x(s.x0)} ${y(s.y)}`;
    parts.push(command, `L ${x(s.x1)} ${y(s.y)}`);
  });
  return parts.join(" ");
}

/** Closed path for the confidence band (upper bounds forward, lower back). */
export function bandPath(steps: Step[], x: (v: number) => number, y: (v: number) => number): string {
  const upper: string[] = [];
  steps.forEach((s, i) => {
    upper.push(`${i === 0 ? "M" : "L"} ${x(s.x0)} ${y(s.hi)}`, `L ${x(s.x1)} ${y(s.hi)}`);
  });
  const lower: string[] = [];
  for (let i = steps.length - 1; i >= 0; i--) {
    const s = steps[i];
    lower.push(`L ${x(s.x1)} ${y(s.lo)}`, `L ${x(s.x0)} ${y(s.lo)}`);
  }
  return [...upper, ...lower, "Z"].join(" ");
}

/** Render the full SVG document for a graph panel. */
export function renderPlotSvg(data: GraphPlotData, options?: Partial<PlotOptions>): string {
  const opts = { ...DEFAULTS, ...options };
  const { x, y } = scales(data, opts);
  const zeroY = y(0);
  const axisTicks = [data.xMin, (data.xMin + data.xMax) / 2, data.xMax];
  const tickMarks = axisTicks
    .map(
      (t) =>
        `<text class="tick" x="${x(t).toFixed(1)}" y="${opts.height - 8}" ` +
        `text-anchor="middle">${fmt(t)}</text>`,
    )
    .join("");
  const segments = data.steps
    .map(
      (s) =>
        `<rect class="hit" data-label="${s.label}" data-y="${s.y}" ` +
        `x="${x(s.x0).toFixed(1)}" y="${opts.margin}" ` +
        `width="${(x(s.x1) - x(s.x0)).toFixed(1)}" ` +
        `height="${opts.height - 2 * opts.margin}"><title>${s.label}: ${s.y}` +
        `</title></rect>`,
    )
    .join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${opts.width} ${opts.height}" ` +
    `class="graph-plot" role="img" aria-label="shape function for ${data.featureName}">` +
    `<path class="band" d="${bandPath(data.steps, x, y)}"/>` +
    `<line class="zero" x1="${opts.margin}" x2="${opts.width - opts.margin}" ` +
    `y1="${zeroY.toFixed(1)}" y2="${zeroY.toFixed(1)}"/>` +
    `<path class="step" d="${stepPath(data.steps, x, y)}"/>` +
    segments +
    tickMarks +
    `</svg>`
  );
}

/** Number of horizontal steps drawn (one per served bin). */
export function countSteps(svg: string): number {
  return (svg.match(/data-label=/g) ?? []).length;
}
