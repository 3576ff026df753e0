/** The three figure kinds, each rendered from validated CSV tables to SVG. */

import { writeFileSync } from "node:fs";

import {
  CONVERGENCE_SCHEMA,
  RUN_SCHEMA,
  loadCsv,
  numbers,
  seriesLabel,
  strings,
  type Table,
} from "./csv.js";
import { PALETTE, document as svgDocument, plot, type Series } from "./svg.js";

export type FigureKind = "energy_trace" | "diagnostics_panel" | "convergence";

export interface FigureRequest {
  kind: FigureKind;
  /** Input CSVs; traces and panels overlay one series per file. */
  inputs: string[];
  /** Output image path (SVG). */
  output: string;
  /** Log-scale the energy axes; convergence plots are always log-log. */
  ylog: boolean;
}

interface RunInput {
  label: string;
  table: Table;
}

function loadRuns(paths: string[]): RunInput[] {
  return paths.map((p) => ({ label: seriesLabel(p), table: loadCsv(p, RUN_SCHEMA) }));
}

function runSeries(inputs: RunInput[], column: string): Series[] {
  return inputs.map((input, i) => ({
    label: input.label,
    color: PALETTE[i % PALETTE.length]!,
    points: numbers(input.table, "time").map((t, r) => ({
      x: t,
      y: numbers(input.table, column)[r]!,
    })),
  }));
}

function energyTrace(request: FigureRequest): string {
  const inputs = loadRuns(request.inputs);
  const body = plot({
    x: 0,
    y: 0,
    width: 720,
    height: 480,
    title: "electric energy",
    xLabel: "time",
    yLabel: "electric energy",
    xScale: "linear",
    yScale: request.ylog ? "log" : "linear",
    series: runSeries(inputs, "electric_energy"),
    legend: true,
  });
  return svgDocument(720, 480, body);
}

function diagnosticsPanel(request: FigureRequest): string {
  const inputs = loadRuns(request.inputs);
  const w = 480;
  const h = 360;
  const panels = [
    { title: "electric energy", column: "electric_energy", x: 0, y: 0, log: request.ylog },
    { title: "mass", column: "mass", x: w, y: 0, log: false },
    { title: "L2 norm", column: "l2_norm", x: 0, y: h, log: false },
    { title: "total energy", column: "total_energy", x: w, y: h, log: false },
  ];
  const body = panels
    .map((panel, i) =>
      plot({
        x: panel.x,
        y: panel.y,
        width: w,
        height: h,
        title: panel.title,
        xLabel: "time",
        yLabel: panel.title,
        xScale: "linear",
        yScale: panel.log ? "log" : "linear",
        series: runSeries(inputs, panel.column),
        legend: i === 0,
      })
    )
    .join("\n");
  return svgDocument(2 * w, 2 * h, body);
}

function convergence(request: FigureRequest): string {
  const series: Series[] = [];
  for (const path of request.inputs) {
    const table = loadCsv(path, CONVERGENCE_SCHEMA);
    const methods = strings(table, "method");
    const dofs = numbers(table, "dof");
    const ts = numbers(table, "t");
    const errs = numbers(table, "error_inf_rel");
    const keys: string[] = [];
    for (let r = 0; r < table.rowCount; r++) {
      const key = `${methods[r]} t=${ts[r]}`;
      if (!keys.includes(key)) keys.push(key);
    }
    const manyTimes = new Set(ts).size > 1;
    for (const key of keys) {
      const points: { x: number; y: number }[] = [];
      for (let r = 0; r < table.rowCount; r++) {
        if (`${methods[r]} t=${ts[r]}` === key) points.push({ x: dofs[r]!, y: errs[r]! });
      }
      points.sort((a, b) => a.x - b.x);
      series.push({
        label: manyTimes || request.inputs.length > 1 ? key : key.split(" ")[0]!,
        color: PALETTE[series.length % PALETTE.length]!,
        points,
        markers: true,
      });
    }
  }
  const body = plot({
    x: 0,
    y: 0,
    width: 720,
    height: 480,
    title: "error vs resolution",
    xLabel: "dof per direction",
    yLabel: "relative max-norm error",
    xScale: "value-log",
    yScale: "log",
    series,
    legend: true,
  });
  return svgDocument(720, 480, body);
}

/** Read and validate the inputs, render the figure, write the SVG. */
export function render(request: FigureRequest): void {
  if (request.inputs.length === 0) throw new Error("no input CSVs given");
  let text: string;
  switch (request.kind) {
    case "energy_trace":
      text = energyTrace(request);
      break;
    case "diagnostics_panel":
      text = diagnosticsPanel(request);
      break;
    case "convergence":
      text = convergence(request);
      break;
    default:
      throw new Error(`unknown figure kind '${String(request.kind)}'`);
  }
  writeFileSync(request.output, text);
}
