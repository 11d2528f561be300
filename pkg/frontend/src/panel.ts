/** Render one comparison panel (time series, one curve per run) as SVG. */

import { formatTick, linearScale, logScale, type Scale } from "./scale.js";
import { AXIS_COLOR, FONT, GRID_COLOR, seriesStyle } from "./style.js";

export interface PanelSeries {
  label: string;
  t: number[];
  values: number[];
}

export interface PanelOptions {
  title: string;
  log: boolean;
  width: number;
  height: number;
}

const MARGIN = { left: 64, right: 16, top: 28, bottom: 36 };

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

function dataRange(series: PanelSeries[], log: boolean): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const v of s.values) {
      if (!Number.isFinite(v)) continue;
      if (log && v <= 0) continue;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!(lo <= hi)) {
    throw new Error(`panel has no displayable data${log ? " (log scale, all values <= 0)" : ""}`);
  }
  return [lo, hi];
}

/** Inner body of one panel placed at (0, yOffset) of the parent SVG. */
export function renderPanelBody(
  series: PanelSeries[],
  opts: PanelOptions,
  yOffset: number,
): string {
  const x0 = MARGIN.left;
  const x1 = opts.width - MARGIN.right;
  const y0 = yOffset + opts.height - MARGIN.bottom;
  const y1 = yOffset + MARGIN.top;

  const tMin = Math.min(...series.map((s) => s.t[0] ?? 0));
  const tMax = Math.max(...series.map((s) => s.t[s.t.length - 1] ?? 1));
  const xScale = linearScale(tMin, tMax, x0, x1, 8);

  const [lo, hi] = dataRange(series, opts.log);
  let yScale: Scale;
  if (opts.log) {
    yScale = logScale(lo, hi, y0, y1);
  } else {
    const pad = 0.05 * (hi - lo || Math.abs(hi) || 1);
    yScale = linearScale(lo - pad, hi + pad, y0, y1, 5);
  }

  const parts: string[] = [];
  parts.push(`<g font="${FONT}" font-size="11" font-family="sans-serif">`);
  parts.push(
    `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y1 - 10)}" text-anchor="middle" ` +
    `font-size="13" fill="${AXIS_COLOR}">${esc(opts.title)}</text>`,
  );

  // grid and ticks
  for (const tv of yScale.ticks()) {
    const y = yScale.map(tv);
    parts.push(`<line x1="${fmt(x0)}" y1="${fmt(y)}" x2="${fmt(x1)}" y2="${fmt(y)}" stroke="${GRID_COLOR}" stroke-width="0.6"/>`);
    parts.push(`<text x="${fmt(x0 - 6)}" y="${fmt(y + 3.5)}" text-anchor="end" fill="${AXIS_COLOR}">${esc(formatTick(tv))}</text>`);
  }
  for (const tv of xScale.ticks()) {
    const x = xScale.map(tv);
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(y0)}" x2="${fmt(x)}" y2="${fmt(y0 + 4)}" stroke="${AXIS_COLOR}" stroke-width="0.8"/>`);
    parts.push(`<text x="${fmt(x)}" y="${fmt(y0 + 16)}" text-anchor="middle" fill="${AXIS_COLOR}">${esc(formatTick(tv))}</text>`);
  }
  parts.push(`<rect x="${fmt(x0)}" y="${fmt(y1)}" width="${fmt(x1 - x0)}" height="${fmt(y0 - y1)}" fill="none" stroke="${AXIS_COLOR}" stroke-width="1"/>`);
  parts.push(`<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y0 + 30)}" text-anchor="middle" fill="${AXIS_COLOR}">t</text>`);

  // curves
  series.forEach((s, idx) => {
    const st = seriesStyle(idx);
    const pts: string[] = [];
    for (let i = 0; i < s.t.length; i++) {
      const v = s.values[i]!;
      if (!Number.isFinite(v) || !yScale.displayable(v)) continue;
      pts.push(`${fmt(xScale.map(s.t[i]!))},${fmt(yScale.map(v))}`);
    }
    const dash = st.dash ? ` stroke-dasharray="${st.dash}"` : "";
    parts.push(
      `<polyline fill="none" stroke="${st.color}" stroke-width="${st.width}"${dash} points="${pts.join(" ")}"/>`,
    );
  });

  // legend (top-right corner of the plot area)
  const legendX = x1 - 150;
  series.forEach((s, idx) => {
    const st = seriesStyle(idx);
    const ly = y1 + 12 + idx * 15;
    const dash = st.dash ? ` stroke-dasharray="${st.dash}"` : "";
    parts.push(`<line x1="${fmt(legendX)}" y1="${fmt(ly - 3)}" x2="${fmt(legendX + 26)}" y2="${fmt(ly - 3)}" stroke="${st.color}" stroke-width="${st.width}"${dash}/>`);
    parts.push(`<text x="${fmt(legendX + 32)}" y="${fmt(ly)}" fill="${AXIS_COLOR}">${esc(s.label)}</text>`);
  });

  parts.push("</g>");
  return parts.join("\n");
}

export function wrapSvg(body: string, width: number, height: number): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}
