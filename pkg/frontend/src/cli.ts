/** Command line mirroring the FigureRequest fields. */

import { SchemaError } from "./csv.js";
import { render, type FigureKind, type FigureRequest } from "./render.js";

const USAGE =
  "usage: plotkit --kind energy_trace|diagnostics_panel|convergence " +
  "--out FILE.svg [--ylog] INPUT.csv [INPUT.csv ...]";

const KINDS: FigureKind[] = ["energy_trace", "diagnostics_panel", "convergence"];

export function parseArgs(argv: string[]): FigureRequest {
  let kind: FigureKind | undefined;
  let output: string | undefined;
  let ylog = false;
  const inputs: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--kind") {
      const value = argv[++i];
      if (value === undefined || !KINDS.includes(value as FigureKind)) {
        throw new UsageError(`--kind must be one of ${KINDS.join(", ")}`);
      }
      kind = value as FigureKind;
    } else if (arg === "--out") {
      const value = argv[++i];
      if (value === undefined) throw new UsageError("--out needs a file path");
      output = value;
    } else if (arg === "--ylog") {
      ylog = true;
    } else if (arg === "--help" || arg === "-h") {
      throw new UsageError(USAGE);
    } else if (arg.startsWith("-")) {
      throw new UsageError(`unknown flag '${arg}'`);
    } else {
      inputs.push(arg);
    }
  }
  if (kind === undefined) throw new UsageError("missing --kind");
  if (output === undefined) throw new UsageError("missing --out");
  if (inputs.length === 0) throw new UsageError("no input CSVs given");
  return { kind, inputs, output, ylog };
}

export class UsageError extends Error {}

export function main(argv: string[]): number {
  let request: FigureRequest;
  try {
    request = parseArgs(argv);
  } catch (err) {
    console.error(err instanceof UsageError ? err.message : String(err));
    console.error(USAGE);
    return 2;
  }
  try {
    render(request);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(String(err instanceof Error ? err.message : err));
    }
    return 1;
  }
  return 0;
}

// Invoked as a script (bin entry); import.meta.url matches argv[1] then.
import { pathToFileURL } from "node:url";
if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
