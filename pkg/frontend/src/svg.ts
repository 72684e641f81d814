/** DOM-free SVG renderer for plot models. */

import { scaleBand, scaleLinear, scaleLog } from "d3-scale";
import { area, line } from "d3-shape";

import { PlotModel, Point, Series } from "./model.js";

const WIDTH = 760;
const PANEL_H = 360;
const GAP_PANEL_H = 150;
const MARGIN = { top: 42, right: 170, bottom: 48, left: 64 };

/** Stable colors per algorithm name across every plot. */
const PALETTE: Record<string, string> = {
  g_bai: "#1f77b4",
  p1_rage: "#d62728",
  p1_peace: "#2ca02c",
  mixed_peace: "#9467bd",
  peace_baseline: "#8c564b",
  uniform: "#7f7f7f",
};
const FALLBACK = ["#e377c2", "#bcbd22", "#17becf", "#ff7f0e"];

export function colorOf(algorithm: string): string {
  const fixed = PALETTE[algorithm];
  if (fixed !== undefined) return fixed;
  let h = 0;
  for (const c of algorithm) h = (h * 31 + c.charCodeAt(0)) >>> 0;
  return FALLBACK[h % FALLBACK.length]!;
}

export interface RenderResult {
  svg: string;
  /** y-axis data domain of the main panel, for independent inversion */
  yDomain: [number, number];
  /** pixel range [bottom, top] matching yDomain */
  yRange: [number, number];
  xDomain: [number, number];
  xRange: [number, number];
}

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

const fmtTick = (v: number): string =>
  v >= 0.01 && v < 10000 ? String(Number(v.toPrecision(6))) : v.toExponential(0);

function axisTexts(parts: string[], model: PlotModel): void {
  parts.push(
    `<text x="${WIDTH / 2}" y="20" text-anchor="middle" ` +
      `font-size="14">${esc(model.title)}</text>`,
  );
}

export function render(model: PlotModel): RenderResult {
  const hasGapPanel = model.minGapPanel !== null;
  const height =
    MARGIN.top + PANEL_H + (hasGapPanel ? GAP_PANEL_H + 40 : 0) + MARGIN.bottom;
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
      `height="${height}" font-family="sans-serif">`,
    `<rect width="${WIDTH}" height="${height}" fill="white"/>`,
  ];
  axisTexts(parts, model);

  const allPoints: Point[] = model.series.flatMap((s) => s.points);
  const yVals = allPoints.flatMap((p) => [p.y, p.ciLow, p.ciHigh]);
  let yLo = Math.min(...yVals);
  let yHi = Math.max(...yVals);
  if (model.logY) {
    yLo = Math.min(yLo, model.floor);
    if (yLo <= 0) yLo = model.floor;
    if (yHi <= yLo) yHi = yLo * 10;
  } else {
    yLo = Math.min(0, yLo);
    if (yHi <= yLo) yHi = yLo + 1;
  }
  const yTop = MARGIN.top + 14;
  const yBottom = MARGIN.top + PANEL_H;
  const yScale = model.logY
    ? scaleLog().domain([yLo, yHi]).range([yBottom, yTop])
    : scaleLinear().domain([yLo, yHi]).range([yBottom, yTop]);

  const result: RenderResult = {
    svg: "",
    yDomain: [yLo, yHi],
    yRange: [yBottom, yTop],
    xDomain: [0, 1],
    xRange: [MARGIN.left, MARGIN.left + innerW],
  };

  if (model.degenerate) {
    renderBars(parts, model, yScale as (v: number) => number, yBottom, innerW);
  } else {
    renderLines(parts, model, yScale as (v: number) => number, result, innerW);
  }

  // y axis
  const ticks = (model.logY
    ? (yScale as ReturnType<typeof scaleLog>).ticks(5)
    : (yScale as ReturnType<typeof scaleLinear>).ticks(6)
  ).filter((t) => t >= yLo && t <= yHi);
  parts.push(
    `<line x1="${MARGIN.left}" y1="${yTop}" x2="${MARGIN.left}" ` +
      `y2="${yBottom}" stroke="black"/>`,
  );
  for (const t of ticks) {
    const py = (yScale as (v: number) => number)(t);
    parts.push(
      `<line x1="${MARGIN.left - 4}" y1="${py}" x2="${MARGIN.left}" ` +
        `y2="${py}" stroke="black"/>`,
      `<text x="${MARGIN.left - 7}" y="${py + 3}" text-anchor="end" ` +
        `font-size="10">${fmtTick(t)}</text>`,
    );
  }
  parts.push(
    `<text transform="rotate(-90)" x="${-(yTop + yBottom) / 2}" y="16" ` +
      `text-anchor="middle" font-size="12">error probability` +
      `${model.logY ? " (log scale)" : ""}</text>`,
  );

  // zero-error floor annotation
  if (model.logY && allPoints.some((p) => p.atFloor)) {
    const py = (yScale as (v: number) => number)(model.floor);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + innerW}" ` +
        `y2="${py}" stroke="#999" stroke-dasharray="4 3" class="floor"/>`,
      `<text x="${MARGIN.left + 4}" y="${py - 4}" font-size="10" ` +
        `fill="#666">zero-error floor = 1/(2·trials) = ` +
        `${model.floor}</text>`,
    );
  }

  // legend
  let ly = MARGIN.top + 20;
  for (const s of model.series) {
    const c = colorOf(s.algorithm);
    parts.push(
      `<rect x="${WIDTH - MARGIN.right + 16}" y="${ly - 8}" width="12" ` +
        `height="12" fill="${c}"/>`,
      `<text x="${WIDTH - MARGIN.right + 34}" y="${ly + 2}" ` +
        `font-size="11">${esc(s.algorithm)}</text>`,
    );
    ly += 18;
  }

  if (hasGapPanel) {
    renderGapPanel(parts, model, yBottom + 40, innerW, result);
  }

  parts.push(
    `<text x="${MARGIN.left + innerW / 2}" y="${height - 10}" ` +
      `text-anchor="middle" font-size="12">${esc(model.xLabel)}</text>`,
    "</svg>",
  );
  result.svg = parts.join("\n");
  return result;
}

function xExtent(series: Series[]): [number, number] {
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  return hi > lo ? [lo, hi] : [lo - 1, hi + 1];
}

function renderLines(
  parts: string[],
  model: PlotModel,
  y: (v: number) => number,
  result: RenderResult,
  innerW: number,
): void {
  const [xLo, xHi] = xExtent(model.series);
  const x = scaleLinear()
    .domain([xLo, xHi])
    .range([MARGIN.left, MARGIN.left + innerW]);
  result.xDomain = [xLo, xHi];

  const bandGen = area<Point>()
    .x((p) => x(p.x))
    .y0((p) => y(p.ciLow))
    .y1((p) => y(p.ciHigh));
  const lineGen = line<Point>()
    .x((p) => x(p.x))
    .y((p) => y(p.y));

  for (const s of model.series) {
    const c = colorOf(s.algorithm);
    parts.push(
      `<path class="band" data-algorithm="${esc(s.algorithm)}" ` +
        `d="${bandGen(s.points)}" fill="${c}" fill-opacity="0.18" ` +
        `stroke="none"/>`,
    );
  }
  for (const s of model.series) {
    const c = colorOf(s.algorithm);
    parts.push(
      `<path class="series" data-algorithm="${esc(s.algorithm)}" ` +
        `d="${lineGen(s.points)}" fill="none" stroke="${c}" ` +
        `stroke-width="1.8"/>`,
    );
    for (const p of s.points) {
      // open markers distinguish floor-substituted zero-error points
      parts.push(
        `<circle cx="${x(p.x)}" cy="${y(p.y)}" r="3" ` +
          `fill="${p.atFloor ? "white" : c}" stroke="${c}"/>`,
      );
    }
  }

  const xb = MARGIN.top + PANEL_H;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${xb}" x2="${MARGIN.left + innerW}" ` +
      `y2="${xb}" stroke="black"/>`,
  );
  for (const t of x.ticks(6)) {
    parts.push(
      `<line x1="${x(t)}" y1="${xb}" x2="${x(t)}" y2="${xb + 4}" ` +
        `stroke="black"/>`,
      `<text x="${x(t)}" y="${xb + 16}" text-anchor="middle" ` +
        `font-size="10">${fmtTick(t)}</text>`,
    );
  }
}

function renderBars(
  parts: string[],
  model: PlotModel,
  y: (v: number) => number,
  yBottom: number,
  innerW: number,
): void {
  const names = model.series.map((s) => s.algorithm);
  const x = scaleBand<string>()
    .domain(names)
    .range([MARGIN.left, MARGIN.left + innerW])
    .padding(0.25);
  for (const s of model.series) {
    const p = s.points[0]!;
    const c = colorOf(s.algorithm);
    const px = x(s.algorithm)!;
    const py = y(p.y);
    parts.push(
      `<rect class="bar" data-algorithm="${esc(s.algorithm)}" ` +
        `x="${px}" y="${py}" width="${x.bandwidth()}" ` +
        `height="${yBottom - py}" fill="${c}"/>`,
      // CI whisker from the same row's interval
      `<line x1="${px + x.bandwidth() / 2}" y1="${y(p.ciLow)}" ` +
        `x2="${px + x.bandwidth() / 2}" y2="${y(p.ciHigh)}" ` +
        `stroke="black"/>`,
      `<text x="${px + x.bandwidth() / 2}" y="${yBottom + 14}" ` +
        `text-anchor="middle" font-size="10">${esc(s.algorithm)}</text>`,
    );
  }
  parts.push(
    `<line x1="${MARGIN.left}" y1="${yBottom}" ` +
      `x2="${MARGIN.left + innerW}" y2="${yBottom}" stroke="black"/>`,
  );
}

function renderGapPanel(
  parts: string[],
  model: PlotModel,
  top: number,
  innerW: number,
  result: RenderResult,
): void {
  const panel = model.minGapPanel!;
  const x = scaleLinear()
    .domain(result.xDomain)
    .range([MARGIN.left, MARGIN.left + innerW]);
  const lo = 0;
  const hi = Math.max(...panel.map((p) => p.gap)) * 1.1;
  const y = scaleLinear()
    .domain([lo, hi])
    .range([top + GAP_PANEL_H, top]);
  const gen = line<{ x: number; gap: number }>()
    .x((p) => x(p.x))
    .y((p) => y(p.gap));
  parts.push(
    `<path class="min-gap" d="${gen(panel)}" fill="none" ` +
      `stroke="#444" stroke-width="1.5"/>`,
    `<line x1="${MARGIN.left}" y1="${top + GAP_PANEL_H}" ` +
      `x2="${MARGIN.left + innerW}" y2="${top + GAP_PANEL_H}" ` +
      `stroke="black"/>`,
    `<line x1="${MARGIN.left}" y1="${top}" x2="${MARGIN.left}" ` +
      `y2="${top + GAP_PANEL_H}" stroke="black"/>`,
    `<text transform="rotate(-90)" x="${-(top + GAP_PANEL_H / 2)}" ` +
      `y="16" text-anchor="middle" font-size="11">min gap</text>`,
  );
  for (const t of y.ticks(3)) {
    parts.push(
      `<text x="${MARGIN.left - 7}" y="${y(t) + 3}" text-anchor="end" ` +
        `font-size="9">${fmtTick(t)}</text>`,
    );
  }
}
