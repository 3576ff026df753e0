/** Minimal deterministic SVG plotting: fixed palette, fixed fonts, no time-dependent state. */

export const PALETTE = ["#1b6ca8", "#d1495b", "#2e7d32", "#8e5b9f", "#c77d2e", "#4a4a4a"];
export const FONT = "Helvetica, Arial, sans-serif";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed-precision pixel coordinate so output bytes are reproducible. */
export function px(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

/** Compact tick label: plain decimal in a middle range, exponent outside it. */
export function fmt(value: number): string {
  if (value === 0) return "0";
  const mag = Math.abs(value);
  if (mag >= 1e4 || mag < 1e-3) return value.toExponential().replace("e+", "e");
  return String(Number(value.toPrecision(10)));
}

export interface Tick {
  value: number;
  label: string;
}

export interface Scale {
  toPix(value: number): number;
  ticks(): Tick[];
  /** True when a data value cannot be placed on this scale (log of <= 0). */
  drops(value: number): boolean;
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag * (1 + 1e-12)) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(lo: number, hi: number, p0: number, p1: number): Scale {
  if (hi <= lo) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.5;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  return {
    toPix: (value) => p0 + ((value - lo) / span) * (p1 - p0),
    drops: () => false,
    ticks: () => {
      const step = niceStep(span, 5);
      const first = Math.ceil(lo / step - 1e-9) * step;
      const out: Tick[] = [];
      for (let v = first; v <= hi + 1e-9 * span; v += step) {
        const snapped = Math.abs(v) < step * 1e-9 ? 0 : v;
        out.push({ value: snapped, label: fmt(snapped) });
      }
      return out;
    },
  };
}

export function logScale(lo: number, hi: number, p0: number, p1: number): Scale {
  if (!(lo > 0) || !(hi > 0)) throw new Error("log scale needs positive bounds");
  if (hi / lo < 10) {
    const mid = Math.sqrt(lo * hi);
    lo = mid / Math.sqrt(10);
    hi = mid * Math.sqrt(10);
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  return {
    toPix: (value) => p0 + ((Math.log10(value) - llo) / (lhi - llo)) * (p1 - p0),
    drops: (value) => !(value > 0),
    ticks: () => {
      const first = Math.ceil(llo - 1e-9);
      const last = Math.floor(lhi + 1e-9);
      const stride = Math.max(1, Math.ceil((last - first + 1) / 8));
      const out: Tick[] = [];
      for (let e = first; e <= last; e += stride) {
        out.push({ value: Math.pow(10, e), label: `1e${e}` });
      }
      return out;
    },
  };
}

/** Log-positioned scale whose ticks sit at the data's own values (dof axes). */
export function valueTickLogScale(values: number[], p0: number, p1: number): Scale {
  const unique = [...new Set(values)].sort((a, b) => a - b);
  const base = logScale(unique[0] ?? 1, unique[unique.length - 1] ?? 10, p0, p1);
  return {
    toPix: base.toPix,
    drops: base.drops,
    ticks: () => unique.map((v) => ({ value: v, label: fmt(v) })),
  };
}

export interface Series {
  label: string;
  color: string;
  points: { x: number; y: number }[];
  markers?: boolean;
}

export interface PlotSpec {
  /** Pixel box of the whole plot, axes included. */
  x: number;
  y: number;
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: "linear" | "log" | "value-log";
  yScale: "linear" | "log";
  series: Series[];
  legend: boolean;
}

function extent(values: number[], positiveOnly: boolean): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (positiveOnly && !(v > 0)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) return positiveOnly ? [1e-12, 1] : [0, 1];
  return [lo, hi];
}

/** Render one plot into SVG elements (axes, grid ticks, series, legend). */
export function plot(spec: PlotSpec): string {
  const margin = { left: 64, right: 12, top: 26, bottom: 40 };
  const x0 = spec.x + margin.left;
  const x1 = spec.x + spec.width - margin.right;
  const y0 = spec.y + spec.height - margin.bottom;
  const y1 = spec.y + margin.top;

  const xs = spec.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = spec.series.flatMap((s) => s.points.map((p) => p.y));
  const [xlo, xhi] = extent(xs, spec.xScale !== "linear");
  const [ylo, yhi] = extent(ys, spec.yScale === "log");

  const sx =
    spec.xScale === "value-log"
      ? valueTickLogScale(xs, x0, x1)
      : spec.xScale === "log"
        ? logScale(xlo, xhi, x0, x1)
        : linearScale(xlo, xhi, x0, x1);
  const sy =
    spec.yScale === "log" ? logScale(ylo, yhi, y0, y1) : linearScale(ylo, yhi, y0, y1);

  const parts: string[] = [];
  parts.push(
    `<rect x="${px(x0)}" y="${px(y1)}" width="${px(x1 - x0)}" height="${px(y0 - y1)}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`
  );
  parts.push(
    `<text x="${px((x0 + x1) / 2)}" y="${px(spec.y + 16)}" text-anchor="middle" ` +
      `font-size="13" font-weight="bold">${esc(spec.title)}</text>`
  );

  for (const tick of sx.ticks()) {
    const tx = sx.toPix(tick.value);
    if (tx < x0 - 0.5 || tx > x1 + 0.5) continue;
    parts.push(
      `<line x1="${px(tx)}" y1="${px(y0)}" x2="${px(tx)}" y2="${px(y0 + 4)}" stroke="#333333"/>`,
      `<text x="${px(tx)}" y="${px(y0 + 16)}" text-anchor="middle" font-size="10">` +
        `${esc(tick.label)}</text>`
    );
  }
  for (const tick of sy.ticks()) {
    const ty = sy.toPix(tick.value);
    if (ty > y0 + 0.5 || ty < y1 - 0.5) continue;
    parts.push(
      `<line x1="${px(x0 - 4)}" y1="${px(ty)}" x2="${px(x0)}" y2="${px(ty)}" stroke="#333333"/>`,
      `<text x="${px(x0 - 6)}" y="${px(ty + 3)}" text-anchor="end" font-size="10">` +
        `${esc(tick.label)}</text>`
    );
  }
  parts.push(
    `<text x="${px((x0 + x1) / 2)}" y="${px(y0 + 32)}" text-anchor="middle" font-size="11">` +
      `${esc(spec.xLabel)}</text>`,
    `<text x="${px(spec.x + 14)}" y="${px((y0 + y1) / 2)}" text-anchor="middle" font-size="11" ` +
      `transform="rotate(-90 ${px(spec.x + 14)} ${px((y0 + y1) / 2)})">${esc(spec.yLabel)}</text>`
  );

  for (const series of spec.series) {
    const kept = series.points.filter((p) => !sx.drops(p.x) && !sy.drops(p.y));
    if (kept.length === 0) continue;
    const coords = kept.map((p) => `${px(sx.toPix(p.x))},${px(sy.toPix(p.y))}`);
    parts.push(
      `<path d="M${coords.join(" L")}" fill="none" stroke="${series.color}" ` +
        `stroke-width="1.5"/>`
    );
    if (series.markers) {
      for (const c of coords) {
        const [cx, cy] = c.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="2.5" fill="${series.color}"/>`);
      }
    }
  }

  if (spec.legend) {
    let ly = y1 + 8;
    for (const series of spec.series) {
      parts.push(
        `<line x1="${px(x0 + 8)}" y1="${px(ly)}" x2="${px(x0 + 30)}" y2="${px(ly)}" ` +
          `stroke="${series.color}" stroke-width="1.5"/>`,
        `<text x="${px(x0 + 35)}" y="${px(ly + 3)}" font-size="11">${esc(series.label)}</text>`
      );
      ly += 14;
    }
  }
  return parts.join("\n");
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" font-family="${FONT}">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    `\n</svg>\n`
  );
}
