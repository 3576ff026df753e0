import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterEach, beforeAll, describe, expect, it, vi } from "vitest";

import { main, parseArgs } from "../src/cli.js";

const RUN_HEADER = "time,electric_energy,mass,l1_norm,l2_norm,kinetic_energy,total_energy";

let dir: string;
let csv: string;

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), "plotkit-cli-"));
  csv = join(dir, "run.csv");
  writeFileSync(csv, `${RUN_HEADER}\n0,1e-3,1,1,1,1,1\n1,2e-4,1,1,1,1,1\n2,3e-5,1,1,1,1,1\n`);
});

afterEach(() => {
  vi.restoreAllMocks();
});

describe("argument parsing", () => {
  it("mirrors the figure request fields", () => {
    const request = parseArgs(["--kind", "energy_trace", "--ylog", "--out", "f.svg", "a.csv", "b.csv"]);
    expect(request).toEqual({
      kind: "energy_trace",
      inputs: ["a.csv", "b.csv"],
      output: "f.svg",
      ylog: true,
    });
  });

  it("defaults ylog off", () => {
    expect(parseArgs(["--kind", "convergence", "--out", "f.svg", "a.csv"]).ylog).toBe(false);
  });
});

describe("exit codes", () => {
  it("renders a three-row trace and returns 0", () => {
    const out = join(dir, "ok.svg");
    expect(main(["--kind", "energy_trace", "--ylog", "--out", out, csv])).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("</svg>");
  });

  it("returns 2 with usage on a bad kind", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["--kind", "pie", "--out", "f.svg", csv])).toBe(2);
    expect(err.mock.calls.flat().join("\n")).toContain("--kind must be one of");
  });

  it("returns 2 when inputs are missing", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["--kind", "energy_trace", "--out", "f.svg"])).toBe(2);
    expect(err.mock.calls.flat().join("\n")).toContain("no input CSVs");
  });

  it("returns 1 and names the column on a schema mismatch", () => {
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "time,voltage\n0,1\n");
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["--kind", "energy_trace", "--out", join(dir, "bad.svg"), bad])).toBe(1);
    expect(err.mock.calls.flat().join("\n")).toContain("voltage");
  });

  it("returns 1 on an unreadable input", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["--kind", "energy_trace", "--out", "f.svg", join(dir, "nope.csv")])).toBe(1);
    expect(err).toHaveBeenCalled();
  });
});
