import { writeFileSync } from "node:fs";
import { parseProfileCsv, ProfileGrid, SchemaError } from "./csv.js";
import { grays, viridis } from "./colormap.js";

export interface RenderOptions {
  /** isometric ridge surface instead of the default heatmap main panel */
  surface?: boolean;
  /** add a |naive - fast| panel; requires both method columns */
  diff?: boolean;
}

export interface RenderSummary {
  L: number;
  timePoints: number;
  method: "naive" | "fast";
  maxGap: number | null;
  outPath: string;
}

const W = 920;
const MAIN = { x: 70, y: 56, w: 640, h: 400 };

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 1000) return String(Number(v.toPrecision(4)));
  return v.toExponential(1);
}

function text(x: number, y: number, s: string, opts = ""): string {
  return `<text x="${x}" y="${y}" font-family="Helvetica, Arial, sans-serif" ${opts}>${s}</text>`;
}

function heatmap(
  values: number[][],
  ts: number[],
  L: number,
  box: { x: number; y: number; w: number; h: number },
  color: (v: number) => string,
  scale: (v: number) => number,
): string {
  const parts: string[] = [];
  const cw = box.w / L;
  const chh = box.h / ts.length;
  for (let it = 0; it < ts.length; it++) {
    // time increases upward
    const y = box.y + box.h - (it + 1) * chh;
    for (let x = 0; x < L; x++) {
      parts.push(
        `<rect x="${(box.x + x * cw).toFixed(2)}" y="${y.toFixed(2)}" ` +
          `width="${(cw + 0.35).toFixed(2)}" height="${(chh + 0.35).toFixed(2)}" ` +
          `fill="${color(scale(values[it][x]))}"/>`,
      );
    }
  }
  return parts.join("");
}

function siteAxis(box: { x: number; y: number; w: number; h: number }, L: number): string {
  const parts: string[] = [];
  const step = L > 14 ? Math.ceil(L / 10) : 1;
  for (let x = 0; x < L; x += step) {
    const px = box.x + (x + 0.5) * (box.w / L);
    parts.push(`<line x1="${px}" y1="${box.y + box.h}" x2="${px}" y2="${box.y + box.h + 5}" stroke="#333"/>`);
    parts.push(text(px, box.y + box.h + 18, String(x), 'font-size="11" text-anchor="middle"'));
  }
  parts.push(text(box.x + box.w / 2, box.y + box.h + 36, "site x", 'font-size="13" text-anchor="middle"'));
  return parts.join("");
}

function timeAxis(box: { x: number; y: number; w: number; h: number }, ts: number[]): string {
  const parts: string[] = [];
  const n = Math.min(6, ts.length);
  for (let k = 0; k < n; k++) {
    const it = n === 1 ? 0 : Math.round((k * (ts.length - 1)) / (n - 1));
    const py = box.y + box.h - (it + 0.5) * (box.h / ts.length);
    parts.push(`<line x1="${box.x - 5}" y1="${py}" x2="${box.x}" y2="${py}" stroke="#333"/>`);
    parts.push(text(box.x - 8, py + 4, fmt(ts[it]), 'font-size="11" text-anchor="end"'));
  }
  parts.push(
    `<g transform="translate(${box.x - 44},${box.y + box.h / 2}) rotate(-90)">` +
      text(0, 0, "time t", 'font-size="13" text-anchor="middle"') +
      "</g>",
  );
  return parts.join("");
}

function colorbar(x: number, y: number, h: number, label: string, color: (v: number) => string): string {
  const parts: string[] = [];
  const steps = 64;
  for (let i = 0; i < steps; i++) {
    const v = 1 - i / (steps - 1);
    parts.push(
      `<rect x="${x}" y="${(y + (i * h) / steps).toFixed(2)}" width="16" ` +
        `height="${(h / steps + 0.4).toFixed(2)}" fill="${color(v)}"/>`,
    );
  }
  parts.push(`<rect x="${x}" y="${y}" width="16" height="${h}" fill="none" stroke="#333"/>`);
  for (const v of [0, 0.5, 1]) {
    const py = y + h * (1 - v);
    parts.push(text(x + 22, py + 4, fmt(v), 'font-size="11"'));
  }
  parts.push(
    `<g transform="translate(${x + 48},${y + h / 2}) rotate(-90)">` +
      text(0, 0, label, 'font-size="12" text-anchor="middle"') +
      "</g>",
  );
  return parts.join("");
}

function surface(
  values: number[][],
  ts: number[],
  L: number,
  box: { x: number; y: number; w: number; h: number },
): string {
  const parts: string[] = [];
  const T = ts.length;
  const depthX = box.w * 0.25;
  const depthY = box.h * 0.45;
  const ridgeH = box.h * 0.5;
  const baseY = box.y + box.h;
  const spanX = box.w - depthX;
  for (let it = T - 1; it >= 0; it--) {
    const d = T === 1 ? 0 : it / (T - 1);
    const ox = box.x + d * depthX;
    const oy = baseY - d * depthY;
    const pts: string[] = [`${ox.toFixed(1)},${oy.toFixed(1)}`];
    let mean = 0;
    for (let x = 0; x < L; x++) {
      const px = ox + (x / Math.max(1, L - 1)) * spanX;
      const py = oy - values[it][x] * ridgeH;
      pts.push(`${px.toFixed(1)},${py.toFixed(1)}`);
      mean += values[it][x];
    }
    pts.push(`${(ox + spanX).toFixed(1)},${oy.toFixed(1)}`);
    mean /= L;
    parts.push(
      `<polygon points="${pts.join(" ")}" fill="${viridis(Math.min(1, mean * L * 0.5))}" ` +
        `fill-opacity="0.85" stroke="#1a1a2e" stroke-width="0.7"/>`,
    );
  }
  parts.push(text(box.x + spanX / 2, baseY + 18, "site x", 'font-size="13" text-anchor="middle"'));
  parts.push(
    text(box.x + depthX + spanX / 2 + 30, box.y + box.h - depthY - 6, "time ↗",
      'font-size="12" text-anchor="start" fill="#444"'),
  );
  return parts.join("");
}

function pickMethod(grid: ProfileGrid): { method: "naive" | "fast"; values: number[][] } {
  if (grid.naive) return { method: "naive", values: grid.naive };
  return { method: "fast", values: grid.fast! };
}

/** Build the SVG document for a parsed profile grid. */
export function buildSvg(grid: ProfileGrid, opts: RenderOptions): { svg: string; summary: Omit<RenderSummary, "outPath"> } {
  const { method, values } = pickMethod(grid);
  let maxGap: number | null = null;
  if (opts.diff) {
    if (!grid.naive || !grid.fast) {
      throw new SchemaError("difference panel requires both rho_naive and rho_fast columns");
    }
    maxGap = 0;
    for (let it = 0; it < grid.ts.length; it++) {
      for (let x = 0; x < grid.L; x++) {
        maxGap = Math.max(maxGap, Math.abs(grid.naive[it][x] - grid.fast[it][x]));
      }
    }
  }

  const H = opts.diff ? 760 : 560;
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`);
  parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  parts.push(text(MAIN.x, 28, `one-point occupation ρ(x, t)  —  ${grid.L} sites, ` +
    `${grid.ts.length} time points (${method})`, 'font-size="16" font-weight="bold"'));

  if (opts.surface) {
    parts.push(surface(values, grid.ts, grid.L, MAIN));
  } else {
    parts.push(heatmap(values, grid.ts, grid.L, MAIN, viridis, (v) => v));
    parts.push(`<rect x="${MAIN.x}" y="${MAIN.y}" width="${MAIN.w}" height="${MAIN.h}" fill="none" stroke="#333"/>`);
    parts.push(siteAxis(MAIN, grid.L));
    parts.push(timeAxis(MAIN, grid.ts));
  }
  parts.push(colorbar(MAIN.x + MAIN.w + 28, MAIN.y, MAIN.h, "ρ (occupation)", viridis));

  // bird's-eye inset, top-right corner of the main panel
  const inset = { x: MAIN.x + MAIN.w - 158, y: MAIN.y + 10, w: 148, h: 96 };
  parts.push(`<rect x="${inset.x - 4}" y="${inset.y - 4}" width="${inset.w + 8}" height="${inset.h + 8}" fill="white" fill-opacity="0.85" stroke="#333"/>`);
  parts.push(heatmap(values, grid.ts, grid.L, inset, viridis, (v) => v));
  parts.push(text(inset.x + inset.w / 2, inset.y + inset.h + 12, "bird's-eye", 'font-size="10" text-anchor="middle"'));

  if (opts.diff && maxGap !== null) {
    const panel = { x: MAIN.x, y: MAIN.y + MAIN.h + 70, w: MAIN.w, h: 120 };
    const scale = maxGap > 0 ? (v: number) => v / maxGap! : () => 0;
    const diffGrid = grid.ts.map((_, it) =>
      Array.from({ length: grid.L }, (_, x) => Math.abs(grid.naive![it][x] - grid.fast![it][x])),
    );
    parts.push(heatmap(diffGrid, grid.ts, grid.L, panel, grays, scale));
    parts.push(text(panel.x, panel.y - 10,
      `|naive - fast|  (max gap ${maxGap.toExponential(3)})`, 'font-size="13"'));
    parts.push(`<rect x="${panel.x}" y="${panel.y}" width="${panel.w}" height="${panel.h}" fill="none" stroke="#333"/>`);
    parts.push(siteAxis(panel, grid.L));
  }
  parts.push("</svg>");
  return { svg: parts.join("\n"), summary: { L: grid.L, timePoints: grid.ts.length, method, maxGap } };
}

/** Read a one-point CSV, render it, and write the SVG image. */
export function renderOnePoint(csvPath: string, outPath: string, opts: RenderOptions = {}): RenderSummary {
  const grid = parseProfileCsv(csvPath);
  const { svg, summary } = buildSvg(grid, opts);
  writeFileSync(outPath, svg + "\n", "utf-8");
  return { ...summary, outPath };
}
