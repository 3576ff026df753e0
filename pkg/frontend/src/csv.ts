/** CSV loading and schema validation for the solver's output files. */

import { readFileSync, existsSync } from "node:fs";
import { basename } from "node:path";

export class SchemaError extends Error {}

export type ColumnKind = "number" | "string";

export interface Schema {
  name: string;
  columns: { name: string; kind: ColumnKind }[];
}

/** Diagnostics written by `slvp run`. */
export const RUN_SCHEMA: Schema = {
  name: "run",
  columns: [
    { name: "time", kind: "number" },
    { name: "electric_energy", kind: "number" },
    { name: "mass", kind: "number" },
    { name: "l1_norm", kind: "number" },
    { name: "l2_norm", kind: "number" },
    { name: "kinetic_energy", kind: "number" },
    { name: "total_energy", kind: "number" },
  ],
};

/** Error-versus-resolution table written by `slvp convergence`. */
export const CONVERGENCE_SCHEMA: Schema = {
  name: "convergence",
  columns: [
    { name: "method", kind: "string" },
    { name: "dof", kind: "number" },
    { name: "t", kind: "number" },
    { name: "error_inf_rel", kind: "number" },
  ],
};

export interface Table {
  /** Column values by name; numeric columns are number[]. */
  columns: Map<string, (number | string)[]>;
  rowCount: number;
}

/** Parse CSV text against a schema; any mismatch names the offending column. */
export function parseCsv(text: string, schema: Schema, origin = "<csv>"): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${origin}: empty file, expected a ${schema.name} CSV header`);
  }
  const header = (lines[0] ?? "").split(",");
  const want = schema.columns.map((c) => c.name);
  if (header.length !== want.length) {
    const extra = header.filter((h) => !want.includes(h));
    const missing = want.filter((w) => !header.includes(w));
    const offender = extra[0] ?? missing[0] ?? want[want.length - 1];
    throw new SchemaError(
      `${origin}: header has ${header.length} columns, the ${schema.name} schema has ` +
        `${want.length}; offending column '${offender}'`
    );
  }
  for (let i = 0; i < want.length; i++) {
    if (header[i] !== want[i]) {
      throw new SchemaError(
        `${origin}: column ${i + 1} is '${header[i]}', the ${schema.name} schema ` +
          `expects '${want[i]}'`
      );
    }
  }

  const columns = new Map<string, (number | string)[]>();
  for (const c of schema.columns) columns.set(c.name, []);
  for (let r = 1; r < lines.length; r++) {
    const cells = (lines[r] ?? "").split(",");
    if (cells.length !== want.length) {
      throw new SchemaError(
        `${origin}: row ${r + 1} has ${cells.length} cells, expected ${want.length}`
      );
    }
    for (let i = 0; i < schema.columns.length; i++) {
      const col = schema.columns[i]!;
      const cell = cells[i]!;
      if (col.kind === "number") {
        const value = Number(cell);
        if (cell.trim() === "" || !Number.isFinite(value)) {
          throw new SchemaError(
            `${origin}: row ${r + 1}, column '${col.name}': '${cell}' is not a finite number`
          );
        }
        columns.get(col.name)!.push(value);
      } else {
        columns.get(col.name)!.push(cell);
      }
    }
  }
  return { columns, rowCount: lines.length - 1 };
}

export function loadCsv(path: string, schema: Schema): Table {
  return parseCsv(readFileSync(path, "utf8"), schema, path);
}

export function numbers(table: Table, name: string): number[] {
  const values = table.columns.get(name);
  if (values === undefined) throw new SchemaError(`no column '${name}'`);
  return values as number[];
}

export function strings(table: Table, name: string): string[] {
  const values = table.columns.get(name);
  if (values === undefined) throw new SchemaError(`no column '${name}'`);
  return values.map(String);
}

/** Parse a `key = value` sidecar written next to each CSV. */
export function parseMeta(text: string): Map<string, string> {
  const out = new Map<string, string>();
  for (const line of text.split(/\r?\n/)) {
    const at = line.indexOf("=");
    if (at < 0) continue;
    const key = line.slice(0, at).trim();
    const value = line.slice(at + 1).trim();
    if (key.length > 0 && !out.has(key)) out.set(key, value);
  }
  return out;
}

/**
 * Series label for an input CSV: method and dof from the `.meta` sidecar
 * when one exists, else the file stem.
 */
export function seriesLabel(csvPath: string): string {
  const metaPath = csvPath.replace(/\.[^./\\]+$/, "") + ".meta";
  if (existsSync(metaPath)) {
    const meta = parseMeta(readFileSync(metaPath, "utf8"));
    const method = meta.get("method");
    if (method !== undefined) {
      const order = meta.get("dg_order");
      const name = method === "dg" && order !== undefined && order !== "-" ? `dg${order}` : method;
      const dofs = (meta.get("dofs") ?? "").split(",").filter((d) => d.length > 0);
      const unique = [...new Set(dofs)];
      const dofText = unique.length === 1 ? ` @ ${unique[0]} dof` : dofs.length ? ` @ ${dofs.join("x")} dof` : "";
      return `${name}${dofText}`;
    }
  }
  return basename(csvPath).replace(/\.[^.]+$/, "");
}
