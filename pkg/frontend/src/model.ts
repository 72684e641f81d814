/** Builds a plot model from parsed rows: pure data, no rendering. */

import { NoDataError, Row } from "./schema.js";

export interface Point {
  x: number;
  /** plotted rate; zero rates are lifted to the floor on a log axis */
  y: number;
  ciLow: number;
  ciHigh: number;
  /** true when the raw rate was exactly zero and y is the floor value */
  atFloor: boolean;
}

export interface Series {
  algorithm: string;
  points: Point[];
}

export interface PlotModel {
  series: Series[];
  /** true when there is no sweep (single x per algorithm) -> bar chart */
  degenerate: boolean;
  logY: boolean;
  /** ½·(1/trials): where zero error rates are drawn on a log axis */
  floor: number;
  xLabel: string;
  title: string;
  /** companion panel data when min_gap varies along the sweep */
  minGapPanel: { x: number; gap: number }[] | null;
}

/** Zero error rates cannot be drawn on a log axis; they are plotted at
 * half the resolution floor of the experiment, ½·(1/trials). */
export function zeroFloor(trials: number): number {
  return 0.5 / trials;
}

const GAP_REL_TOL = 1e-12;

export function buildModel(
  rows: Row[],
  opts: { x: string; logY: boolean },
): PlotModel {
  const usable = rows.filter((r) => r.errorRate !== null);
  if (usable.length === 0) {
    throw new NoDataError("no successful rows to plot");
  }
  const trials = usable[0]!.trials;
  const floor = zeroFloor(trials);
  const xOf = (r: Row): number | null =>
    opts.x === "trials" ? r.trials : r.sweepValue;

  const degenerate =
    new Set(usable.map((r) => xOf(r) ?? 0)).size <= 1;

  const byAlgo = new Map<string, Point[]>();
  for (const r of usable) {
    const rate = r.errorRate!;
    const lift = (v: number): number =>
      opts.logY && v <= 0 ? floor : v;
    const pt: Point = {
      x: xOf(r) ?? 0,
      y: lift(rate),
      ciLow: lift(r.ciLow ?? rate),
      ciHigh: lift(r.ciHigh ?? rate),
      atFloor: opts.logY && rate === 0,
    };
    if (!byAlgo.has(r.algorithm)) byAlgo.set(r.algorithm, []);
    byAlgo.get(r.algorithm)!.push(pt);
  }
  const series: Series[] = [...byAlgo.entries()].map(
    ([algorithm, points]) => ({
      algorithm,
      points: points.slice().sort((a, b) => a.x - b.x),
    }),
  );

  const gaps = new Map<number, number>();
  for (const r of usable) {
    if (r.minGap !== null) gaps.set(xOf(r) ?? 0, r.minGap);
  }
  const gapValues = [...gaps.values()];
  const gapVaries =
    gapValues.length > 1 &&
    Math.max(...gapValues) - Math.min(...gapValues) >
      GAP_REL_TOL * Math.max(...gapValues);
  const minGapPanel = gapVaries
    ? [...gaps.entries()]
        .map(([x, gap]) => ({ x, gap }))
        .sort((a, b) => a.x - b.x)
    : null;

  const param = usable[0]!.sweepParam;
  return {
    series,
    degenerate,
    logY: opts.logY,
    floor,
    xLabel: degenerate ? "algorithm" : param || opts.x,
    title: usable[0]!.instance,
    minGapPanel,
  };
}
