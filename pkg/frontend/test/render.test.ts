import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { parseProfileCsv, SchemaError } from "../src/csv.js";
import { viridis } from "../src/colormap.js";
import { buildSvg, renderOnePoint } from "../src/render.js";
import { main } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");
const FIGURE = join(FIXTURES, "figure_n3_l21.csv");
const SMALL_BOTH = join(FIXTURES, "small_both.csv");
const T0_ONLY = join(FIXTURES, "t0_only.csv");

function tmp(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "brplot-")), name);
}

describe("csv parsing", () => {
  it("parses the figure-scale profile", () => {
    const grid = parseProfileCsv(FIGURE);
    expect(grid.L).toBe(21);
    expect(grid.ts.length).toBe(25);
    expect(grid.naive).not.toBeNull();
    expect(grid.fast).toBeNull();
    // t = 0 rows are the start-configuration indicator
    for (let x = 0; x < 21; x++) {
      const want = x >= 8 && x <= 10 ? 1 : 0;
      expect(Math.abs(grid.naive![0][x] - want)).toBeLessThan(1e-8);
    }
  });

  it("parses both method columns", () => {
    const grid = parseProfileCsv(SMALL_BOTH);
    expect(grid.L).toBe(7);
    expect(grid.naive).not.toBeNull();
    expect(grid.fast).not.toBeNull();
  });

  it("rejects a wrong column row with diagnostics", () => {
    const bad = tmp("bad.csv");
    writeFileSync(bad, "# bethe-ring v1\nx,t,rho\n0,0,1\n");
    expect(() => parseProfileCsv(bad)).toThrow(SchemaError);
    expect(() => parseProfileCsv(bad)).toThrow(/columns are "x,t,rho"/);
  });

  it("rejects a missing version header", () => {
    const bad = tmp("bad.csv");
    writeFileSync(bad, "x,t,rho_naive,rho_fast\n0,0,1,\n1,0,0,\n");
    expect(() => parseProfileCsv(bad)).toThrow(/first line/);
  });

  it("rejects occupation values outside [0,1] bounds", () => {
    const bad = tmp("bad.csv");
    writeFileSync(
      bad,
      "# bethe-ring v1\nx,t,rho_naive,rho_fast\n0,0,1.5,\n1,0,0,\n",
    );
    expect(() => parseProfileCsv(bad)).toThrow(/outside \[-0.000001, 1.000001\]/);
  });

  it("rejects an incomplete grid", () => {
    const bad = tmp("bad.csv");
    writeFileSync(
      bad,
      "# bethe-ring v1\nx,t,rho_naive,rho_fast\n0,0,0.5,\n1,0,0.5,\n0,1,0.5,\n",
    );
    expect(() => parseProfileCsv(bad)).toThrow(/do not tile/);
  });
});

describe("rendering", () => {
  it("renders the figure-scale heatmap with inset and colorbar", () => {
    const out = tmp("fig.svg");
    const before = readFileSync(FIGURE);
    const summary = renderOnePoint(FIGURE, out, {});
    expect(readFileSync(FIGURE)).toEqual(before); // input untouched
    expect(summary.method).toBe("naive");
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    // main panel + inset draw one rect per cell each
    const cells = (svg.match(/<rect/g) ?? []).length;
    expect(cells).toBeGreaterThan(2 * 21 * 25);
    expect(svg).toContain("bird's-eye");
    expect(svg).toContain("one-point occupation");
  });

  it("renders the surface variant", () => {
    const out = tmp("fig-surface.svg");
    renderOnePoint(FIGURE, out, { surface: true });
    const svg = readFileSync(out, "utf-8");
    expect((svg.match(/<polygon/g) ?? []).length).toBe(25); // one ridge per time
  });

  it("renders a t=0-only profile as unit bars at the start sites", () => {
    const grid = parseProfileCsv(T0_ONLY);
    expect(grid.ts).toEqual([0]);
    for (let x = 0; x < grid.L; x++) {
      const want = x === 2 || x === 4 ? 1 : 0;
      expect(Math.abs(grid.naive![0][x] - want)).toBeLessThan(1e-8);
    }
    const out = tmp("t0.svg");
    const summary = renderOnePoint(T0_ONLY, out, {});
    expect(summary.timePoints).toBe(1);
    expect(readFileSync(out, "utf-8")).toContain("</svg>");
  });

  it("adds a difference panel and reports the column gap", () => {
    const out = tmp("diff.svg");
    const summary = renderOnePoint(SMALL_BOTH, out, { diff: true });
    expect(summary.maxGap).not.toBeNull();
    expect(summary.maxGap!).toBeLessThan(1e-6);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("|naive - fast|");
    expect(svg).toContain(summary.maxGap!.toExponential(3));
  });

  it("refuses the difference panel when a column is missing", () => {
    expect(() => buildSvg(parseProfileCsv(FIGURE), { diff: true })).toThrow(
      /requires both/,
    );
  });
});

describe("colormap", () => {
  it("covers the endpoints and stays in hex form", () => {
    expect(viridis(0)).toBe("#440154");
    expect(viridis(1)).toBe("#fde725");
    expect(viridis(0.5)).toMatch(/^#[0-9a-f]{6}$/);
    expect(viridis(-3)).toBe(viridis(0));
    expect(viridis(7)).toBe(viridis(1));
  });
});

describe("cli", () => {
  it("renders and exits 0", () => {
    const out = tmp("cli.svg");
    expect(main([FIGURE, out, "--surface"])).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("</svg>");
  });

  it("reports schema errors with exit 3", () => {
    const bad = tmp("bad.csv");
    writeFileSync(bad, "nope\n,\n,\n");
    expect(main([bad, tmp("x.svg")])).toBe(3);
  });

  it("rejects unknown flags and bad arity", () => {
    expect(main([FIGURE])).toBe(2);
    expect(main([FIGURE, "out.svg", "--wat"])).toBe(2);
  });
});
