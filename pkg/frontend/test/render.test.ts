import { mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { render } from "../src/render.js";

const RUN_HEADER = "time,electric_energy,mass,l1_norm,l2_norm,kinetic_energy,total_energy";

function runCsv(rows: [number, number][]): string {
  const lines = rows.map(([t, ee]) => `${t},${ee},552.9,552.9,3.96,1105.9,1106.0`);
  return `${RUN_HEADER}\n${lines.join("\n")}\n`;
}

let dir: string;
let traceA: string;
let traceB: string;
let study: string;

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  traceA = join(dir, "dg4_run.csv");
  writeFileSync(
    traceA,
    runCsv([
      [0, 1.5e-3],
      [1, 2.1e-4],
      [2, 1.4e-4],
      [3, 1.6e-7],
    ])
  );
  writeFileSync(
    join(dir, "dg4_run.meta"),
    "version = 0.1.0\ncommand = run\nmethod = dg\ndg_order = 4\ndofs = 32,32,32,32\n"
  );
  traceB = join(dir, "spline_run.csv");
  writeFileSync(
    traceB,
    runCsv([
      [0, 1.5e-3],
      [1, 2.2e-4],
      [2, 1.4e-4],
      [3, 2.0e-7],
    ])
  );
  study = join(dir, "study.csv");
  writeFileSync(
    study,
    "method,dof,t,error_inf_rel\n" +
      "spline,64,10,0.12\nspline,128,10,0.023\nspline,256,10,0.0017\n" +
      "dg6,66,10,0.185\ndg6,126,10,0.088\ndg6,258,10,0.0094\n"
  );
});

describe("energy_trace", () => {
  it("writes a nonzero SVG with one path and one legend label per input", () => {
    const out = join(dir, "trace.svg");
    render({ kind: "energy_trace", inputs: [traceA, traceB], output: out, ylog: true });
    const svg = readFileSync(out, "utf8");
    expect(statSync(out).size).toBeGreaterThan(0);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.match(/<path /g)).toHaveLength(2);
    expect(svg).toContain("dg4 @ 32 dof");
    expect(svg).toContain("spline_run");
    expect(svg).toContain("1e-5");
  });

  it("is idempotent and leaves its inputs untouched", () => {
    const before = readFileSync(traceA, "utf8");
    const out1 = join(dir, "idem1.svg");
    const out2 = join(dir, "idem2.svg");
    render({ kind: "energy_trace", inputs: [traceA], output: out1, ylog: true });
    render({ kind: "energy_trace", inputs: [traceA], output: out2, ylog: true });
    expect(readFileSync(out1, "utf8")).toBe(readFileSync(out2, "utf8"));
    expect(readFileSync(traceA, "utf8")).toBe(before);
  });

  it("supports a linear energy axis", () => {
    const out = join(dir, "linear.svg");
    render({ kind: "energy_trace", inputs: [traceA], output: out, ylog: false });
    expect(readFileSync(out, "utf8")).toContain("<path ");
  });
});

describe("diagnostics_panel", () => {
  it("draws four labeled sub-plots", () => {
    const out = join(dir, "panel.svg");
    render({ kind: "diagnostics_panel", inputs: [traceA], output: out, ylog: true });
    const svg = readFileSync(out, "utf8");
    for (const title of ["electric energy", "mass", "L2 norm", "total energy"]) {
      expect(svg).toContain(`>${title}</text>`);
    }
    expect(svg.match(/<rect /g)!.length).toBeGreaterThanOrEqual(5);
    expect(svg.match(/<path /g)).toHaveLength(4);
  });
});

describe("convergence", () => {
  it("draws one log-log line per method with dof-valued ticks", () => {
    const out = join(dir, "study.svg");
    render({ kind: "convergence", inputs: [study], output: out, ylog: true });
    const svg = readFileSync(out, "utf8");
    expect(svg.match(/<path /g)).toHaveLength(2);
    expect(svg).toContain("spline");
    expect(svg).toContain("dg6");
    for (const dof of ["64", "128", "256"]) {
      expect(svg).toContain(`>${dof}</text>`);
    }
    expect(svg).toContain("1e-2");
    expect(svg.match(/<circle /g)!.length).toBe(6);
  });
});

describe("schema enforcement", () => {
  it("refuses a convergence CSV fed to a trace figure", () => {
    expect(() =>
      render({ kind: "energy_trace", inputs: [study], output: join(dir, "x.svg"), ylog: true })
    ).toThrowError(/'method'/);
  });
});
