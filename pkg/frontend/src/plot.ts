/**
 * The two chart kinds:
 *
 * - over-time: window accuracy vs instances seen, one line per model
 *   (the 100-window prequential view).
 * - vs-size: final accuracy vs hidden-layer size (log-x by default), with
 *   runtime overlaid dashed on a right-hand axis; one line per activation.
 */

import { SweepRow, WindowRow } from "./csv.js";
import {
  PALETTE,
  Scale,
  Series,
  linearScale,
  logScale,
  plotArea,
  renderChart,
} from "./svg.js";

function groupBy<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const groups = new Map<string, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(k, [row]);
    }
  }
  return groups;
}

function xScaleFor(values: number[], logX: boolean, outLo: number, outHi: number): Scale {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  return logX ? logScale(lo, hi, outLo, outHi) : linearScale(lo, hi, outLo, outHi);
}

export function plotOverTime(rows: WindowRow[], logX = false): string {
  const { x0, x1, y0, y1 } = plotArea();
  const groups = groupBy(rows, (r) => (r.dataset ? `${r.model} @ ${r.dataset}` : r.model));
  const xs = rows.map((r) => r.instancesSeen);
  const xScale = xScaleFor(xs, logX, x0, x1);
  const yScale = linearScale(0, 1, y0, y1);
  const series: Series[] = [...groups.entries()].map(([label, g], i) => ({
    label,
    color: PALETTE[i % PALETTE.length],
    points: g
      .slice()
      .sort((a, b) => a.instancesSeen - b.instancesSeen)
      .map((r) => [r.instancesSeen, r.windowAcc] as [number, number]),
  }));
  const datasets = new Set(rows.map((r) => r.dataset));
  const title =
    datasets.size === 1
      ? `Prequential accuracy over windows (${[...datasets][0]})`
      : "Prequential accuracy over windows";
  return renderChart({
    title,
    xLabel: "instances seen",
    yLabel: "window accuracy",
    xScale,
    yScale,
    series,
  });
}

export interface VsSizeOptions {
  logX?: boolean;
  /** divide h by this input width to plot the h/d ratio instead of h */
  inputWidth?: number;
  /** overlay runtime on a right-hand axis (default true) */
  runtime?: boolean;
}

export function plotVsSize(rows: SweepRow[], options: VsSizeOptions = {}): string {
  const logX = options.logX ?? true;
  const showRuntime = options.runtime ?? true;
  const d = options.inputWidth;
  const { x0, x1, y0, y1 } = plotArea();
  const xOf = (r: SweepRow) => (d ? r.h / d : r.h);
  const xs = rows.map(xOf);
  const xScale = xScaleFor(xs, logX, x0, x1);
  const yScale = linearScale(0, 1, y0, y1);
  const groups = groupBy(rows, (r) => r.activation);

  const series: Series[] = [];
  const rightSeries: Series[] = [];
  let colorIdx = 0;
  for (const [activation, g] of groups.entries()) {
    // best accuracy per size: the sweep explores (mu, eta) per size too
    const bySize = groupBy(g, (r) => String(xOf(r)));
    const accPoints: Array<[number, number]> = [];
    const timePoints: Array<[number, number]> = [];
    for (const [, rowsAtSize] of bySize.entries()) {
      const best = rowsAtSize.reduce((a, b) => (b.accuracy > a.accuracy ? b : a));
      accPoints.push([xOf(best), best.accuracy]);
      timePoints.push([xOf(best), best.elapsedS]);
    }
    accPoints.sort((a, b) => a[0] - b[0]);
    timePoints.sort((a, b) => a[0] - b[0]);
    const color = PALETTE[colorIdx % PALETTE.length];
    colorIdx += 1;
    series.push({ label: `${activation} accuracy`, color, points: accPoints });
    if (showRuntime) {
      rightSeries.push({
        label: `${activation} runtime`,
        color,
        dashed: true,
        points: timePoints,
      });
    }
  }

  let yRightScale: Scale | undefined;
  if (showRuntime) {
    const times = rightSeries.flatMap((s) => s.points.map((p) => p[1]));
    yRightScale = linearScale(0, Math.max(...times, 1e-9), y0, y1);
  }
  return renderChart({
    title: d ? "Accuracy vs hidden size ratio h/d" : "Accuracy vs hidden size h",
    xLabel: d ? "h/d (log)" : logX ? "hidden units h (log)" : "hidden units h",
    yLabel: "accuracy",
    xScale,
    yScale,
    series,
    yRightLabel: showRuntime ? "runtime (s)" : undefined,
    yRightScale,
    rightSeries: showRuntime ? rightSeries : undefined,
  });
}
