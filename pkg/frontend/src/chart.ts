/**
 * Minimal deterministic SVG line charts.
 *
 * The whole chart is assembled by string templating from the input values
 * and a fixed style, so the same series always produce the same bytes.
 * Nothing here consults the clock, the locale, or a random source, and all
 * numbers are formatted with locale-independent helpers.
 */

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  color: string;
  points: Point[];
  dash?: string; // stroke-dasharray
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  /** Force the y-axis floor (counts and traffic panels pin this to 0). */
  yMin?: number;
  yMax?: number;
  /** Explicit x tick positions; computed from the data range if absent. */
  xTicks?: number[];
}

// Fixed layout, part of the "same input, same bytes" contract.
const W = 720;
const H = 300;
const ML = 64;
const MR = 20;
const MT = 34;
const MB = 46;
const PW = W - ML - MR;
const PH = H - MT - MB;

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Round-number ticks covering [min, max], roughly `want` of them. */
export function niceTicks(min: number, max: number, want: number): number[] {
  const range = max - min || 1;
  const rough = range / want;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let i = 0; start + i * step <= max + step * 1e-9; i++) {
    ticks.push(start + i * step);
  }
  return ticks;
}

/** Format an axis value without float noise ("0.65", not "0.6500000000000001"). */
export function fmtTick(v: number): string {
  return String(Number(v.toPrecision(12)));
}

export function renderLineChart(opts: ChartOptions): string {
  const allPoints = opts.series.flatMap((s) => s.points);
  if (allPoints.length === 0) {
    throw new Error("renderLineChart: no points");
  }

  const xs = allPoints.map((p) => p.x);
  const ys = allPoints.map((p) => p.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = opts.yMin ?? Math.min(...ys);
  const yMax = opts.yMax ?? Math.max(...ys);

  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * PW;
  const yOf = (v: number) => MT + PH - ((v - yMin) / (yMax - yMin || 1)) * PH;

  const xTicks = opts.xTicks ?? niceTicks(xMin, xMax, 7);
  const yTicks = niceTicks(yMin, yMax, 5);

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ML}" y="${MT - 12}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  // Grid
  for (const v of yTicks) {
    const y = yOf(v).toFixed(1);
    s += `<line x1="${ML}" y1="${y}" x2="${ML + PW}" y2="${y}" stroke="#eee" stroke-width="0.6"/>\n`;
  }

  // Series: one polyline plus point markers, tagged for inspection.
  for (const sr of opts.series) {
    const pts = sr.points
      .map((p) => `${xOf(p.x).toFixed(1)},${yOf(p.y).toFixed(1)}`)
      .join(" ");
    const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
    s += `<polyline data-series="${esc(sr.label)}" fill="none" stroke="${sr.color}" stroke-width="1.4"${dash} points="${pts}"/>\n`;
    for (const p of sr.points) {
      s += `<circle cx="${xOf(p.x).toFixed(1)}" cy="${yOf(p.y).toFixed(1)}" r="2.2" fill="${sr.color}"/>\n`;
    }
  }

  // Axes frame
  s += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + PH}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ML}" y1="${MT + PH}" x2="${ML + PW}" y2="${MT + PH}" stroke="#333" stroke-width="0.8"/>\n`;

  // X ticks and label
  for (const v of xTicks) {
    const x = xOf(v).toFixed(1);
    s += `<line x1="${x}" y1="${MT + PH}" x2="${x}" y2="${MT + PH + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x}" y="${MT + PH + 15}" text-anchor="middle" font-size="8" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }
  s += `<text x="${ML + PW / 2}" y="${H - 8}" text-anchor="middle" font-size="9" fill="#333">${esc(opts.xLabel)}</text>\n`;

  // Y ticks and label
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ML - 4}" y1="${y.toFixed(1)}" x2="${ML}" y2="${y.toFixed(1)}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${ML - 7}" y="${(y + 2.5).toFixed(1)}" text-anchor="end" font-size="8" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }
  s += `<text x="14" y="${MT + PH / 2}" text-anchor="middle" font-size="9" fill="#333" transform="rotate(-90,14,${MT + PH / 2})">${esc(opts.yLabel)}</text>\n`;

  // Legend, top right, one row per series
  const legendW = Math.max(...opts.series.map((sr) => sr.label.length)) * 5.5 + 28;
  const legendH = opts.series.length * 12 + 6;
  const lx = ML + PW - legendW - 4;
  const ly = MT + 6;
  s += `<rect x="${lx}" y="${ly}" width="${legendW}" height="${legendH}" rx="2" fill="#fff" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
  opts.series.forEach((sr, i) => {
    const rowY = ly + 10 + i * 12;
    const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
    s += `<line x1="${lx + 6}" y1="${rowY}" x2="${lx + 20}" y2="${rowY}" stroke="${sr.color}" stroke-width="1.4"${dash}/>\n`;
    s += `<text x="${lx + 24}" y="${rowY + 3}" font-size="8" fill="#444">${esc(sr.label)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}
