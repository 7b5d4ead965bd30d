#!/usr/bin/env node
/**
 * Render a chart panel from ponfed CSV result files.
 *
 * Usage:
 *   ponfed-plots render --panel bandwidth --in out/sweep.csv --out bw.svg
 *   ponfed-plots render --panel accuracy \
 *       --in out/records_classical.csv out/records_sfl.csv --out acc.svg
 *
 * The bandwidth panel reads sweep CSVs; the involved and accuracy panels
 * read per-round records CSVs and accept several files at once (one per
 * mode is typical). Exit codes follow the ponfed CLI: 2 for usage or
 * schema problems, 1 for filesystem trouble, 0 on success.
 */

import { readFile, writeFile } from "node:fs/promises";
import { pathToFileURL } from "node:url";

import { IoError, parseRecordsCsv, parseSweepCsv, SchemaError } from "./csv.js";
import { accuracyPanel, bandwidthPanel, involvedPanel, PANELS, type PanelKind } from "./panels.js";

export const USAGE =
  "usage: ponfed-plots render --panel <bandwidth|involved|accuracy> --in <csv ...> --out <image.svg>";

interface RenderArgs {
  panel: PanelKind;
  inputs: string[];
  out: string;
}

class UsageError extends Error {}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

function parseArgs(argv: string[]): RenderArgs {
  if (argv[0] !== "render") {
    throw new UsageError(argv.length ? `unknown command: ${argv[0]}` : "missing command");
  }
  let panel: string | undefined;
  const inputs: string[] = [];
  let out: string | undefined;

  let i = 1;
  while (i < argv.length) {
    const flag = argv[i];
    if (flag === "--panel") {
      panel = argv[++i];
      i++;
    } else if (flag === "--in") {
      i++;
      while (i < argv.length && !argv[i].startsWith("--")) {
        inputs.push(argv[i]);
        i++;
      }
    } else if (flag === "--out") {
      out = argv[++i];
      i++;
    } else {
      throw new UsageError(`unknown flag: ${flag}`);
    }
  }

  if (panel === undefined || !(PANELS as readonly string[]).includes(panel)) {
    throw new UsageError(`--panel must be one of ${PANELS.join(", ")}`);
  }
  if (inputs.length === 0) {
    throw new UsageError("--in requires at least one CSV path");
  }
  if (out === undefined) {
    throw new UsageError("--out requires an output path");
  }
  return { panel: panel as PanelKind, inputs, out };
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

async function readText(path: string): Promise<string> {
  try {
    return await readFile(path, "utf-8");
  } catch (err) {
    throw new IoError(`cannot read ${path}: ${(err as Error).message}`);
  }
}

async function renderPanel(args: RenderArgs): Promise<string> {
  const texts = [];
  for (const path of args.inputs) {
    texts.push(await readText(path));
  }
  if (args.panel === "bandwidth") {
    return bandwidthPanel(texts.flatMap((t, i) => parseSweepCsv(t, args.inputs[i])));
  }
  const rows = texts.flatMap((t, i) => parseRecordsCsv(t, args.inputs[i]));
  return args.panel === "involved" ? involvedPanel(rows) : accuracyPanel(rows);
}

/** Run the CLI against an argv slice and return the process exit code. */
export async function run(argv: string[]): Promise<number> {
  let args: RenderArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    console.error(USAGE);
    return 2;
  }

  try {
    const svg = await renderPanel(args);
    try {
      await writeFile(args.out, svg, "utf-8");
    } catch (err) {
      throw new IoError(`cannot write ${args.out}: ${(err as Error).message}`);
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    if (err instanceof IoError) {
      console.error(err.message);
      return 1;
    }
    throw err;
  }
  console.error(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  run(process.argv.slice(2)).then((code) => process.exit(code));
}
