#!/usr/bin/env node
/**
 * qrs-plot --kind {steering,randomness} --csv PATH [--csv PATH] --out PATH
 *
 * Reads quditsteer sweep CSVs and writes a publication-style SVG figure.
 * Exits nonzero (writing nothing) when a CSV is empty or off-schema.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseSweepCsv } from "./csv.js";
import { buildFigureModel, FigureKind } from "./figure.js";
import { renderSvg } from "./svg.js";

export interface PlotOptions {
  kind: FigureKind;
  csvPaths: string[];
  outPath: string;
}

export function parseArgs(argv: string[]): PlotOptions {
  let kind: string | undefined;
  const csvPaths: string[] = [];
  let outPath: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value after ${arg}`);
      return argv[i];
    };
    if (arg === "--kind") kind = next();
    else if (arg === "--csv") csvPaths.push(next());
    else if (arg === "--out") outPath = next();
    else throw new Error(`unknown argument ${arg}`);
  }
  if (kind !== "steering" && kind !== "randomness") {
    throw new Error("--kind must be steering or randomness");
  }
  if (csvPaths.length === 0) throw new Error("at least one --csv is required");
  if (!outPath) throw new Error("--out is required");
  return { kind, csvPaths, outPath };
}

/** Render the requested figure; returns the SVG it wrote. */
export function runPlot(options: PlotOptions): string {
  const tables = options.csvPaths.map((path) =>
    parseSweepCsv(readFileSync(path, "utf-8"), basename(path))
  );
  const model = buildFigureModel(options.kind, tables);
  const svg = renderSvg(model);
  writeFileSync(options.outPath, svg, "utf-8");
  return svg;
}

export function main(argv: string[]): number {
  try {
    const options = parseArgs(argv);
    runPlot(options);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : err}\n`);
    return 1;
  }
}

if (process.argv[1] && basename(process.argv[1]).startsWith("plot")) {
  process.exit(main(process.argv.slice(2)));
}
