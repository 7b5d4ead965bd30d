/**
 * Parsers for the experiment CSV files written by the ponfed CLI.
 *
 * Two layouts exist: per-round records (one row per round) and sweep
 * aggregates (one row per client count per mode). Both are strict: the
 * header must match exactly and every cell must parse. A chart built from
 * a file that silently dropped or reordered a column would lie, so any
 * deviation raises SchemaError instead of guessing.
 *
 * Neither format ever quotes fields (modes are bare tokens, numbers are
 * bare decimals), so splitting on commas is a complete parser here.
 */

export class SchemaError extends Error {}

export class IoError extends Error {}

export const RECORDS_HEADER = [
  "round",
  "mode",
  "n_selected",
  "n_involved",
  "upstream_bits",
  "saving_fraction",
  "accuracy",
  "t_total_min_s",
  "t_total_mean_s",
  "t_total_max_s",
] as const;

export const SWEEP_HEADER = [
  "n_selected",
  "mode",
  "mean_upstream_bits",
  "mean_involved",
  "final_accuracy",
] as const;

const MODES = new Set(["classical", "sfl"]);

/** One row of a per-round records file. */
export interface RecordRow {
  round: number;
  mode: string;
  n_selected: number;
  n_involved: number;
  upstream_bits: number;
  saving_fraction: number;
  accuracy: number;
  t_total_min_s: number;
  t_total_mean_s: number;
  t_total_max_s: number;
}

/** One row of a sweep aggregate file. */
export interface SweepRow {
  n_selected: number;
  mode: string;
  mean_upstream_bits: number;
  mean_involved: number;
  final_accuracy: number;
}

// ---------------------------------------------------------------------------
// Cell-level checks
// ---------------------------------------------------------------------------

function splitRows(text: string): string[][] {
  const lines = text
    .split("\n")
    .map((l) => (l.endsWith("\r") ? l.slice(0, -1) : l));
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  return lines.map((l) => l.split(","));
}

function checkShape(
  rows: string[][],
  header: readonly string[],
  name: string,
): void {
  if (rows.length === 0 || rows[0].join(",") !== header.join(",")) {
    throw new SchemaError(`${name}: expected header ${header.join(",")}`);
  }
  if (rows.length === 1) {
    throw new SchemaError(`${name}: no data rows`);
  }
  for (let i = 1; i < rows.length; i++) {
    if (rows[i].length !== header.length) {
      throw new SchemaError(
        `${name}:${i + 1}: expected ${header.length} columns, got ${rows[i].length}`,
      );
    }
  }
}

function num(cell: string, name: string, lineno: number, col: string): number {
  // Number() accepts the writer's scientific notation ("1.267968e+09").
  const v = cell.trim() === "" ? NaN : Number(cell);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`${name}:${lineno}: ${col}: not a number: ${JSON.stringify(cell)}`);
  }
  return v;
}

function count(cell: string, name: string, lineno: number, col: string): number {
  const v = num(cell, name, lineno, col);
  if (!Number.isInteger(v) || v < 0) {
    throw new SchemaError(`${name}:${lineno}: ${col}: expected a non-negative integer, got ${cell}`);
  }
  return v;
}

function fraction(cell: string, name: string, lineno: number, col: string): number {
  const v = num(cell, name, lineno, col);
  if (v < 0 || v > 1) {
    throw new SchemaError(`${name}:${lineno}: ${col}: expected a value in [0, 1], got ${cell}`);
  }
  return v;
}

function mode(cell: string, name: string, lineno: number): string {
  if (!MODES.has(cell)) {
    throw new SchemaError(
      `${name}:${lineno}: mode: expected one of ${[...MODES].join(", ")}, got ${JSON.stringify(cell)}`,
    );
  }
  return cell;
}

// ---------------------------------------------------------------------------
// File-level parsers
// ---------------------------------------------------------------------------

/** Parse per-round records. `name` labels diagnostics, usually the path. */
export function parseRecordsCsv(text: string, name: string): RecordRow[] {
  const rows = splitRows(text);
  checkShape(rows, RECORDS_HEADER, name);
  return rows.slice(1).map((row, i) => {
    const ln = i + 2;
    return {
      round: count(row[0], name, ln, "round"),
      mode: mode(row[1], name, ln),
      n_selected: count(row[2], name, ln, "n_selected"),
      n_involved: count(row[3], name, ln, "n_involved"),
      upstream_bits: num(row[4], name, ln, "upstream_bits"),
      saving_fraction: fraction(row[5], name, ln, "saving_fraction"),
      accuracy: fraction(row[6], name, ln, "accuracy"),
      t_total_min_s: num(row[7], name, ln, "t_total_min_s"),
      t_total_mean_s: num(row[8], name, ln, "t_total_mean_s"),
      t_total_max_s: num(row[9], name, ln, "t_total_max_s"),
    };
  });
}

/** Parse sweep aggregates. `name` labels diagnostics, usually the path. */
export function parseSweepCsv(text: string, name: string): SweepRow[] {
  const rows = splitRows(text);
  checkShape(rows, SWEEP_HEADER, name);
  return rows.slice(1).map((row, i) => {
    const ln = i + 2;
    return {
      n_selected: count(row[0], name, ln, "n_selected"),
      mode: mode(row[1], name, ln),
      mean_upstream_bits: num(row[2], name, ln, "mean_upstream_bits"),
      mean_involved: num(row[3], name, ln, "mean_involved"),
      final_accuracy: fraction(row[4], name, ln, "final_accuracy"),
    };
  });
}
