import { describe, expect, it } from "vitest";

import {
  parseRecordsCsv,
  parseSweepCsv,
  RECORDS_HEADER,
  SchemaError,
  SWEEP_HEADER,
} from "../src/csv.js";
import { readFixture } from "./helpers.js";

const recordsLine =
  "1,sfl,48,48,1.267968e+09,0.666666667,0.6075,14.9480254,21.1557854,27.3635454";

describe("parseSweepCsv", () => {
  it("parses the sweep fixture with both modes per client count", () => {
    const rows = parseSweepCsv(readFixture("sweep.csv"), "sweep.csv");
    expect(rows).toHaveLength(8);
    expect(rows[0]).toEqual({
      n_selected: 32,
      mode: "classical",
      mean_upstream_bits: 845312000,
      mean_involved: 32,
      final_accuracy: 0.6225,
    });
    const sflBits = rows.filter((r) => r.mode === "sfl").map((r) => r.mean_upstream_bits);
    expect(new Set(sflBits).size).toBe(1);
  });

  it("reads the writer's scientific notation back to the exact value", () => {
    const rows = parseSweepCsv(readFixture("sweep.csv"), "sweep.csv");
    const c48 = rows.find((r) => r.mode === "classical" && r.n_selected === 48)!;
    expect(c48.mean_upstream_bits).toBe(1267968000);
  });

  it("rejects a header-only file", () => {
    const text = SWEEP_HEADER.join(",") + "\n";
    expect(() => parseSweepCsv(text, "empty.csv")).toThrowError(SchemaError);
    expect(() => parseSweepCsv(text, "empty.csv")).toThrowError(/no data rows/);
  });

  it("rejects a records file offered as a sweep", () => {
    expect(() =>
      parseSweepCsv(readFixture("records_sfl.csv"), "records_sfl.csv"),
    ).toThrowError(/expected header n_selected,mode/);
  });
});

describe("parseRecordsCsv", () => {
  it("parses both per-round fixtures", () => {
    const cls = parseRecordsCsv(readFixture("records_classical.csv"), "cls.csv");
    const sfl = parseRecordsCsv(readFixture("records_sfl.csv"), "sfl.csv");
    expect(cls).toHaveLength(10);
    expect(sfl).toHaveLength(10);
    expect(cls.map((r) => r.round)).toEqual([1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
    expect(new Set(cls.map((r) => r.mode))).toEqual(new Set(["classical"]));
    for (const r of sfl) {
      expect(r.mode).toBe("sfl");
      expect(r.n_selected).toBe(48);
      expect(r.n_involved).toBeLessThanOrEqual(48);
      expect(r.accuracy).toBeGreaterThan(0);
    }
  });

  it("accepts CRLF line endings", () => {
    const text = RECORDS_HEADER.join(",") + "\r\n" + recordsLine + "\r\n";
    expect(parseRecordsCsv(text, "crlf.csv")).toHaveLength(1);
  });

  it("rejects an empty file", () => {
    expect(() => parseRecordsCsv("", "void.csv")).toThrowError(/expected header/);
  });

  it("rejects a row with missing columns, naming the line", () => {
    const text = RECORDS_HEADER.join(",") + "\n1,sfl,48,48\n";
    expect(() => parseRecordsCsv(text, "short.csv")).toThrowError(/short\.csv:2/);
  });

  it("rejects non-numeric cells", () => {
    const bad = recordsLine.replace("0.6075", "lots");
    const text = RECORDS_HEADER.join(",") + "\n" + bad + "\n";
    expect(() => parseRecordsCsv(text, "bad.csv")).toThrowError(/not a number/);
  });

  it("rejects an unknown mode token", () => {
    const bad = recordsLine.replace("sfl", "hybrid");
    const text = RECORDS_HEADER.join(",") + "\n" + bad + "\n";
    expect(() => parseRecordsCsv(text, "bad.csv")).toThrowError(/mode/);
  });

  it("rejects fractions outside [0, 1] and fractional counts", () => {
    const badAcc = recordsLine.replace("0.6075", "1.5");
    expect(() =>
      parseRecordsCsv(RECORDS_HEADER.join(",") + "\n" + badAcc + "\n", "acc.csv"),
    ).toThrowError(/\[0, 1\]/);
    const badCount = recordsLine.replace("48,48", "48,47.5");
    expect(() =>
      parseRecordsCsv(RECORDS_HEADER.join(",") + "\n" + badCount + "\n", "cnt.csv"),
    ).toThrowError(/integer/);
  });
});
