#!/usr/bin/env node
/**
 * streamclf-plots: render SVG charts from experiment CSVs.
 *
 *   node dist/main.js --kind over-time --in results.csv [--in more.csv] --out chart.svg [--logx]
 *   node dist/main.js --kind vs-size  --in sweep.csv --out chart.svg [--linear] [--d 8] [--no-runtime]
 *
 * vs-size charts are log-x by default (--linear opts out); over-time charts
 * are linear unless --logx is passed.
 *
 * Existing output files are only replaced with --force. Exit codes:
 * 0 success, 2 usage or input-format error.
 */

import { existsSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { CsvFormatError, readSweepRows, readWindowRows } from "./csv.js";
import { plotOverTime, plotVsSize } from "./plot.js";

const USAGE =
  "usage: streamclf-plots --kind over-time|vs-size --in <csv> [--in <csv> ...] " +
  "--out <svg> [--logx] [--force] [--d <input width>] [--no-runtime]";

export function run(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        out: { type: "string" },
        logx: { type: "boolean", default: false },
        linear: { type: "boolean", default: false },
        force: { type: "boolean", default: false },
        d: { type: "string" },
        "no-runtime": { type: "boolean", default: false },
      },
      allowPositionals: false,
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  const { kind, in: inputs, out } = args.values;
  if (!kind || !inputs || inputs.length === 0 || !out) {
    console.error(`error: --kind, --in, and --out are required\n${USAGE}`);
    return 2;
  }
  if (kind !== "over-time" && kind !== "vs-size") {
    console.error(`error: unknown kind '${kind}' (expected over-time or vs-size)`);
    return 2;
  }
  if (existsSync(out) && !args.values.force) {
    console.error(`error: ${out} exists; pass --force to overwrite`);
    return 2;
  }
  let svg: string;
  try {
    if (kind === "over-time") {
      const rows = inputs.flatMap((p) => readWindowRows(p));
      svg = plotOverTime(rows, args.values.logx);
    } else {
      const rows = inputs.flatMap((p) => readSweepRows(p));
      const d = args.values.d ? Number(args.values.d) : undefined;
      if (args.values.d !== undefined && (!Number.isFinite(d) || d! <= 0)) {
        console.error(`error: --d must be a positive number, got '${args.values.d}'`);
        return 2;
      }
      // vs-size charts are log-x by convention; --linear opts out
      svg = plotVsSize(rows, {
        logX: !args.values.linear,
        inputWidth: d,
        runtime: !args.values["no-runtime"],
      });
    }
  } catch (err) {
    if (err instanceof CsvFormatError || err instanceof Error) {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
  writeFileSync(out, svg, "utf8");
  console.log(`wrote ${out}`);
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("main.js") || entry.endsWith("main.ts")) {
  process.exit(run(process.argv.slice(2)));
}
