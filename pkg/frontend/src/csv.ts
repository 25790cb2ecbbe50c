/**
 * Readers for the two CSV formats the experiment CLI emits.
 *
 * Results CSV (run command):
 *   model,dataset,instances_seen,window_acc,cum_acc,elapsed_s
 *   ... one row per prequential window, then a summary row that repeats the
 *   final instances_seen (dropped here).
 *
 * Sweep CSV (sweep command):
 *   rank,activation,h,mu,eta,gamma,accuracy,instances,elapsed_s
 */

import { readFileSync } from "node:fs";

export class CsvFormatError extends Error {}

export interface WindowRow {
  model: string;
  dataset: string;
  instancesSeen: number;
  windowAcc: number;
  cumAcc: number;
  elapsedS: number;
}

export interface SweepRow {
  rank: number;
  activation: string;
  h: number;
  mu: number;
  eta: number;
  gamma: number;
  accuracy: number;
  elapsedS: number;
}

function parseTable(path: string): { header: string[]; rows: string[][] } {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError(`${path}: empty CSV`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows = lines.slice(1).map((l) => l.split(",").map((c) => c.trim()));
  return { header, rows };
}

function columnIndex(header: string[], name: string, path: string): number {
  const i = header.indexOf(name);
  if (i < 0) {
    throw new CsvFormatError(`${path}: missing column '${name}' (have: ${header.join(", ")})`);
  }
  return i;
}

function num(raw: string, column: string, path: string, line: number): number {
  const v = Number(raw);
  if (!Number.isFinite(v)) {
    throw new CsvFormatError(`${path}:${line}: non-numeric value '${raw}' in column '${column}'`);
  }
  return v;
}

/** Read one results CSV, dropping the trailing summary row of each series. */
export function readWindowRows(path: string): WindowRow[] {
  const { header, rows } = parseTable(path);
  const iModel = columnIndex(header, "model", path);
  const iDataset = columnIndex(header, "dataset", path);
  const iSeen = columnIndex(header, "instances_seen", path);
  const iWin = columnIndex(header, "window_acc", path);
  const iCum = columnIndex(header, "cum_acc", path);
  const iElapsed = columnIndex(header, "elapsed_s", path);
  const out: WindowRow[] = [];
  rows.forEach((cells, k) => {
    out.push({
      model: cells[iModel],
      dataset: cells[iDataset],
      instancesSeen: num(cells[iSeen], "instances_seen", path, k + 2),
      windowAcc: num(cells[iWin], "window_acc", path, k + 2),
      cumAcc: num(cells[iCum], "cum_acc", path, k + 2),
      elapsedS: num(cells[iElapsed], "elapsed_s", path, k + 2),
    });
  });
  // the summary row repeats the last window's instances_seen: drop it
  const cleaned = out.filter((row, k) => {
    const prev = out[k - 1];
    return !(
      prev !== undefined &&
      prev.model === row.model &&
      prev.dataset === row.dataset &&
      prev.instancesSeen === row.instancesSeen
    );
  });
  if (cleaned.length === 0) {
    throw new CsvFormatError(`${path}: no data rows`);
  }
  return cleaned;
}

/** Read one sweep CSV (ranked configurations). */
export function readSweepRows(path: string): SweepRow[] {
  const { header, rows } = parseTable(path);
  const iRank = columnIndex(header, "rank", path);
  const iAct = columnIndex(header, "activation", path);
  const iH = columnIndex(header, "h", path);
  const iMu = columnIndex(header, "mu", path);
  const iEta = columnIndex(header, "eta", path);
  const iGamma = columnIndex(header, "gamma", path);
  const iAcc = columnIndex(header, "accuracy", path);
  const iElapsed = columnIndex(header, "elapsed_s", path);
  const out = rows.map((cells, k) => ({
    rank: num(cells[iRank], "rank", path, k + 2),
    activation: cells[iAct],
    h: num(cells[iH], "h", path, k + 2),
    mu: num(cells[iMu], "mu", path, k + 2),
    eta: num(cells[iEta], "eta", path, k + 2),
    gamma: num(cells[iGamma], "gamma", path, k + 2),
    accuracy: num(cells[iAcc], "accuracy", path, k + 2),
    elapsedS: num(cells[iElapsed], "elapsed_s", path, k + 2),
  }));
  if (out.length === 0) {
    throw new CsvFormatError(`${path}: no data rows`);
  }
  return out;
}
