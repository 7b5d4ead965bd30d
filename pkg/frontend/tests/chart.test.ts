import { describe, expect, it } from "vitest";

import { esc, fmtTick, niceTicks, renderLineChart } from "../src/chart.js";
import { seriesPoints } from "./helpers.js";

const twoSeries = {
  title: "demo",
  xLabel: "x units",
  yLabel: "y units",
  series: [
    {
      label: "alpha",
      color: "#123456",
      points: [
        { x: 1, y: 2 },
        { x: 2, y: 4 },
        { x: 3, y: 1 },
      ],
    },
    {
      label: "beta",
      color: "#654321",
      points: [
        { x: 1, y: 3 },
        { x: 2, y: 3 },
        { x: 3, y: 3 },
      ],
    },
  ],
};

describe("renderLineChart", () => {
  it("is a pure function of its options", () => {
    expect(renderLineChart(twoSeries)).toBe(renderLineChart(twoSeries));
  });

  it("labels title, axes and legend", () => {
    const svg = renderLineChart(twoSeries);
    expect(svg).toContain(">demo</text>");
    expect(svg).toContain(">x units</text>");
    expect(svg).toContain(">y units</text>");
    expect(svg).toContain(">alpha</text>");
    expect(svg).toContain(">beta</text>");
    expect(svg).toMatch(/^<svg xmlns=/);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("projects a constant series onto a single y coordinate", () => {
    const pts = seriesPoints(renderLineChart(twoSeries), "beta");
    const ys = new Set(pts.map(([, y]) => y));
    expect(ys.size).toBe(1);
    const xs = pts.map(([x]) => x);
    expect(xs).toEqual([...xs].sort((a, b) => a - b));
  });

  it("escapes markup in labels", () => {
    const svg = renderLineChart({
      ...twoSeries,
      title: "a < b & c",
    });
    expect(svg).toContain("a &lt; b &amp; c");
    expect(svg).not.toContain("a < b");
  });

  it("refuses to draw from no points", () => {
    expect(() =>
      renderLineChart({ ...twoSeries, series: [{ label: "x", color: "#000", points: [] }] }),
    ).toThrowError(/no points/);
  });
});

describe("niceTicks", () => {
  it("covers a plain range with round steps", () => {
    expect(niceTicks(0, 100, 5)).toEqual([0, 20, 40, 60, 80, 100]);
  });

  it("picks sub-unit steps for narrow ranges", () => {
    const ticks = niceTicks(0.55, 0.68, 5);
    expect(ticks.length).toBeGreaterThanOrEqual(3);
    expect(ticks[0]).toBeCloseTo(0.55, 12);
    expect(ticks[1]).toBeCloseTo(0.6, 12);
    for (const t of ticks) {
      expect(t).toBeGreaterThanOrEqual(0.55 - 1e-9);
      expect(t).toBeLessThanOrEqual(0.68 + 1e-9);
    }
  });
});

describe("fmtTick", () => {
  it("suppresses accumulated float noise", () => {
    expect(fmtTick(0.55000000000000004)).toBe("0.55");
    expect(fmtTick(0.7000000000000001)).toBe("0.7");
    expect(fmtTick(422.656)).toBe("422.656");
    expect(fmtTick(1000)).toBe("1000");
  });
});

describe("esc", () => {
  it("escapes ampersands and angle brackets", () => {
    expect(esc("a&b<c>d")).toBe("a&amp;b&lt;c&gt;d");
  });
});
