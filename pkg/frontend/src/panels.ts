/**
 * The three standard panels over ponfed result files.
 *
 * Each panel is a straight projection of CSV columns onto a line chart.
 * No simulation quantity is recomputed here; the only arithmetic is the
 * bits-to-megabits scaling demanded by the bandwidth axis unit.
 */

import type { RecordRow, SweepRow } from "./csv.js";
import { niceTicks, renderLineChart, type Series } from "./chart.js";

export type PanelKind = "bandwidth" | "involved" | "accuracy";

export const PANELS: readonly PanelKind[] = ["bandwidth", "involved", "accuracy"];

const MODE_COLORS: Record<string, string> = {
  classical: "#c0392b",
  sfl: "#2462a8",
};

const BITS_PER_MBIT = 1e6;

function toSeries(
  rows: { mode: string; x: number; y: number }[],
): Series[] {
  const byMode = new Map<string, { x: number; y: number }[]>();
  for (const r of rows) {
    const pts = byMode.get(r.mode);
    if (pts) pts.push({ x: r.x, y: r.y });
    else byMode.set(r.mode, [{ x: r.x, y: r.y }]);
  }
  // Alphabetical mode order keeps colors and legend rows stable no matter
  // how the input files were ordered on the command line.
  return [...byMode.keys()].sort().map((label) => ({
    label,
    color: MODE_COLORS[label],
    points: byMode.get(label)!.slice().sort((a, b) => a.x - b.x),
  }));
}

function roundTicks(rows: RecordRow[]): number[] {
  const lo = Math.min(...rows.map((r) => r.round));
  const hi = Math.max(...rows.map((r) => r.round));
  return niceTicks(lo, hi, 8).filter(Number.isInteger);
}

/** Mean upstream traffic per round against the number of selected clients. */
export function bandwidthPanel(rows: SweepRow[]): string {
  const series = toSeries(
    rows.map((r) => ({
      mode: r.mode,
      x: r.n_selected,
      y: r.mean_upstream_bits / BITS_PER_MBIT,
    })),
  );
  const ns = [...new Set(rows.map((r) => r.n_selected))].sort((a, b) => a - b);
  const top = Math.max(...rows.map((r) => r.mean_upstream_bits)) / BITS_PER_MBIT;
  return renderLineChart({
    title: "Upstream traffic per round",
    xLabel: "Selected clients N",
    yLabel: "Upstream traffic (Mbit/round)",
    series,
    yMin: 0,
    yMax: top * 1.08,
    xTicks: ns,
  });
}

/** Involved-client counts round by round. */
export function involvedPanel(rows: RecordRow[]): string {
  const series = toSeries(
    rows.map((r) => ({ mode: r.mode, x: r.round, y: r.n_involved })),
  );
  const top = Math.max(...rows.map((r) => Math.max(r.n_involved, r.n_selected)));
  return renderLineChart({
    title: "Involved clients per round",
    xLabel: "Round",
    yLabel: "Involved clients (count)",
    series,
    yMin: 0,
    yMax: top * 1.08,
    xTicks: roundTicks(rows),
  });
}

/** Test accuracy round by round, zoomed to the observed range. */
export function accuracyPanel(rows: RecordRow[]): string {
  const series = toSeries(
    rows.map((r) => ({ mode: r.mode, x: r.round, y: r.accuracy })),
  );
  const accs = rows.map((r) => r.accuracy);
  // Snap the window outward to a 0.05 grid so small runs do not produce
  // odd fractional axis limits.
  const lo = Math.max(0, Math.floor((Math.min(...accs) - 0.02) * 20) / 20);
  const hi = Math.min(1, Math.ceil((Math.max(...accs) + 0.02) * 20) / 20);
  return renderLineChart({
    title: "Accuracy per round",
    xLabel: "Round",
    yLabel: "Accuracy (fraction)",
    series,
    yMin: lo,
    yMax: hi,
    xTicks: roundTicks(rows),
  });
}
