/** Figure models: the plotted data, separated from SVG rendering. */

import { SweepTable } from "./csv.js";

export type FigureKind = "steering" | "randomness";

export interface SeriesPoint {
  x: number;
  y: number;
  err: number;
}

export interface Series {
  label: string;
  color: string;
  dashed: boolean;
  points: SeriesPoint[];
}

export interface RefLine {
  y: number;
  label: string;
  dashed: boolean;
}

export interface FigureModel {
  kind: FigureKind;
  xLabel: string;
  yLabel: string;
  series: Series[];
  lines: RefLine[];
}

const SERIES_COLORS = ["#c2272d", "#1f4e9c", "#2a7f3f"]; // red, blue, green

/**
 * Build the plotted dataset for one figure.
 *
 * Steering figures show S versus p with one horizontal line per distinct
 * LHS bound found in the data; randomness figures show H_min versus p with
 * the one-bit ceiling of projective qubit measurements.  Plotted
 * coordinates are exactly the CSV values; nothing is recomputed.
 */
export function buildFigureModel(kind: FigureKind, tables: SweepTable[]): FigureModel {
  if (tables.length === 0) {
    throw new Error("at least one sweep CSV is required");
  }
  const series: Series[] = tables.map((table, i) => ({
    label: table.name,
    color: SERIES_COLORS[i % SERIES_COLORS.length],
    dashed: i > 0, // first curve solid, later ones dotted, as in the figures
    points: table.rows.map((row) => ({
      x: row.p,
      y: kind === "steering" ? row.S : row.H_min,
      err: kind === "steering" ? row.S_stddev : row.H_stddev,
    })),
  }));

  const lines: RefLine[] = [];
  if (kind === "steering") {
    const bounds: number[] = [];
    for (const table of tables) {
      for (const row of table.rows) {
        if (!bounds.some((b) => Math.abs(b - row.S_LHS) < 1e-9)) {
          bounds.push(row.S_LHS);
        }
      }
    }
    bounds.sort((a, b) => b - a);
    bounds.forEach((bound, i) => {
      lines.push({ y: bound, label: `LHS bound ${bound.toFixed(4)}`, dashed: i > 0 });
    });
  } else {
    lines.push({ y: 1.0, label: "one-bit limit", dashed: false });
  }

  return {
    kind,
    xLabel: "visibility p",
    yLabel: kind === "steering" ? "steering parameter S" : "certified randomness H_min (bits)",
    series,
    lines,
  };
}
