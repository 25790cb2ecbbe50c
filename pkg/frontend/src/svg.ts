/** Minimal SVG chart scaffolding: scales, axes, polylines, legend. */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const WIDTH = 760;
export const HEIGHT = 440;
export const MARGINS: Margins = { top: 36, right: 170, bottom: 52, left: 64 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export interface Scale {
  (v: number): number;
  ticks: number[];
  format(v: number): string;
}

function innerRange(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGINS.left,
    x1: WIDTH - MARGINS.right,
    y0: HEIGHT - MARGINS.bottom,
    y1: MARGINS.top,
  };
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n) ?? mag * 10;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-9; v += step) ticks.push(Number(v.toPrecision(12)));
  return ticks;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const f = ((v: number) => outLo + ((v - lo) / span) * (outHi - outLo)) as Scale;
  f.ticks = niceTicks(lo, hi);
  f.format = (v: number) => formatNumber(v);
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo <= 0) {
    throw new Error(`log scale needs positive domain, got [${lo}, ${hi}]`);
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  const f = ((v: number) => outLo + ((Math.log10(v) - llo) / span) * (outHi - outLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.floor(llo); e <= Math.ceil(lhi); e++) {
    const t = Math.pow(10, e);
    if (t >= lo * 0.999 && t <= hi * 1.001) ticks.push(t);
  }
  f.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  f.format = (v: number) => formatNumber(v);
  return f;
}

export function formatNumber(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(0).replace("+", "");
  if (Number.isInteger(v)) return String(v);
  return String(Number(v.toPrecision(4)));
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dashed?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  yRightLabel?: string;
  yRightScale?: Scale;
  rightSeries?: Series[];
}

export function renderChart(spec: ChartSpec): string {
  const { x0, x1, y0, y1 } = innerRange();
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="20" text-anchor="middle" font-size="15">${esc(spec.title)}</text>`,
  );

  // frame
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#444"/>`,
  );

  // x axis ticks and grid
  for (const t of spec.xScale.ticks) {
    const px = spec.xScale(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#444"/>`);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#ddd" stroke-dasharray="2,3"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 18}" text-anchor="middle">${esc(spec.xScale.format(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${esc(spec.xLabel)}</text>`,
  );

  // y axis ticks and grid
  for (const t of spec.yScale.ticks) {
    const py = spec.yScale(t);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#444"/>`);
    parts.push(`<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#eee"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end">${esc(spec.yScale.format(t))}</text>`,
    );
  }
  parts.push(
    `<text transform="rotate(-90 16 ${(y0 + y1) / 2})" x="16" y="${(y0 + y1) / 2}" ` +
      `text-anchor="middle">${esc(spec.yLabel)}</text>`,
  );

  // right axis (runtime overlays)
  if (spec.yRightScale && spec.yRightLabel) {
    for (const t of spec.yRightScale.ticks) {
      const py = spec.yRightScale(t);
      parts.push(`<line x1="${x1}" y1="${py}" x2="${x1 + 5}" y2="${py}" stroke="#444"/>`);
      parts.push(
        `<text x="${x1 + 8}" y="${py + 4}" text-anchor="start">${esc(spec.yRightScale.format(t))}</text>`,
      );
    }
    parts.push(
      `<text transform="rotate(90 ${x1 + 44} ${(y0 + y1) / 2})" x="${x1 + 44}" y="${(y0 + y1) / 2}" ` +
        `text-anchor="middle">${esc(spec.yRightLabel)}</text>`,
    );
  }

  const drawSeries = (series: Series[], yScale: Scale) => {
    for (const s of series) {
      const pts = s.points
        .map(([vx, vy]) => `${spec.xScale(vx).toFixed(2)},${yScale(vy).toFixed(2)}`)
        .join(" ");
      const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
      parts.push(
        `<polyline fill="none" stroke="${s.color}" stroke-width="1.8"${dash} points="${pts}"/>`,
      );
    }
  };
  drawSeries(spec.series, spec.yScale);
  if (spec.rightSeries && spec.yRightScale) drawSeries(spec.rightSeries, spec.yRightScale);

  // legend
  const legendEntries = [...spec.series, ...(spec.rightSeries ?? [])];
  legendEntries.forEach((s, i) => {
    const ly = y1 + 14 + i * 18;
    const lx = x1 + 58;
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${s.color}" stroke-width="2"${dash}/>`);
    parts.push(`<text x="${lx + 27}" y="${ly + 4}">${esc(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return innerRange();
}
