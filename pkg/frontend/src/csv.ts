/** Parsing and validation of quditsteer sweep CSVs. */

export const SWEEP_COLUMNS = [
  "p",
  "p_eff",
  "S",
  "S_LHS",
  "W_QRS",
  "steering_detected",
  "H_min",
  "P_guess",
  "S_stddev",
  "H_stddev",
] as const;

export interface SweepRow {
  p: number;
  p_eff: number;
  S: number;
  S_LHS: number;
  W_QRS: number;
  steering_detected: boolean;
  H_min: number;
  P_guess: number;
  S_stddev: number;
  H_stddev: number;
}

export interface SweepTable {
  name: string;
  rows: SweepRow[];
  skipped: number; // rows carrying explicit error markers
}

/** Parse one sweep CSV; throws with the missing columns spelled out. */
export function parseSweepCsv(text: string, name = "<csv>"): SweepTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error(`${name}: empty CSV`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const missing = SWEEP_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(`${name}: missing columns: ${missing.join(", ")}`);
  }
  if (lines.length === 1) {
    throw new Error(`${name}: no data rows`);
  }
  const index = new Map(header.map((h, i) => [h, i]));
  const rows: SweepRow[] = [];
  let skipped = 0;
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(`${name}: row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
    }
    if (cells.some((c) => c.trim() === "error")) {
      skipped += 1;
      continue;
    }
    const num = (column: string): number => {
      const value = Number(cells[index.get(column)!]);
      if (!Number.isFinite(value)) {
        throw new Error(`${name}: row ${i + 1}: bad number in column ${column}`);
      }
      return value;
    };
    rows.push({
      p: num("p"),
      p_eff: num("p_eff"),
      S: num("S"),
      S_LHS: num("S_LHS"),
      W_QRS: num("W_QRS"),
      steering_detected: cells[index.get("steering_detected")!].trim() === "true",
      H_min: num("H_min"),
      P_guess: num("P_guess"),
      S_stddev: num("S_stddev"),
      H_stddev: num("H_stddev"),
    });
  }
  if (rows.length === 0) {
    throw new Error(`${name}: every data row is an error marker`);
  }
  return { name, rows, skipped };
}
