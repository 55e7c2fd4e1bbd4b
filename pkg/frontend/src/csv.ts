import { readFileSync } from "node:fs";

export interface ProfileGrid {
  /** ring length; sites are 0..L-1 */
  L: number;
  /** time values in file order */
  ts: number[];
  /** rho[t-index][site] per available method */
  naive: number[][] | null;
  fast: number[][] | null;
}

const HEADER = "# bethe-ring v1";
const COLUMNS = "x,t,rho_naive,rho_fast";
const RHO_MIN = -1e-6;
const RHO_MAX = 1 + 1e-6;

export class SchemaError extends Error {}

/** Parse and validate a one-point CSV written by the bethe-ring CLI. */
export function parseProfileCsv(path: string): ProfileGrid {
  const text = readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length < 3) {
    throw new SchemaError(`${path}: expected header, column row, and data rows`);
  }
  if (lines[0] !== HEADER) {
    throw new SchemaError(`${path}: first line is ${JSON.stringify(lines[0])}, expected ${JSON.stringify(HEADER)}`);
  }
  if (lines[1] !== COLUMNS) {
    throw new SchemaError(
      `${path}: columns are ${JSON.stringify(lines[1])}, expected ${JSON.stringify(COLUMNS)}`,
    );
  }

  const rows = lines.slice(2).map((ln, i) => {
    const parts = ln.split(",");
    if (parts.length !== 4) {
      throw new SchemaError(`${path}: row ${i + 3} has ${parts.length} fields, expected 4`);
    }
    return parts;
  });

  const sites = new Set<number>();
  const tsOrder: number[] = [];
  const tIndex = new Map<number, number>();
  for (const [xs, tsv] of rows.map((r) => [r[0], r[1]] as const)) {
    const x = Number(xs);
    if (!Number.isInteger(x) || x < 0) {
      throw new SchemaError(`${path}: bad site index ${JSON.stringify(xs)}`);
    }
    sites.add(x);
    const t = Number(tsv);
    if (!Number.isFinite(t)) throw new SchemaError(`${path}: bad time value ${JSON.stringify(tsv)}`);
    if (!tIndex.has(t)) {
      tIndex.set(t, tsOrder.length);
      tsOrder.push(t);
    }
  }
  const L = sites.size;
  for (let x = 0; x < L; x++) {
    if (!sites.has(x)) throw new SchemaError(`${path}: site column is not contiguous, missing ${x}`);
  }
  if (rows.length !== L * tsOrder.length) {
    throw new SchemaError(
      `${path}: ${rows.length} rows do not tile ${tsOrder.length} times x ${L} sites`,
    );
  }

  const hasNaive = rows.some((r) => r[2] !== "");
  const hasFast = rows.some((r) => r[3] !== "");
  if (!hasNaive && !hasFast) {
    throw new SchemaError(`${path}: both rho columns are empty`);
  }
  const grid = (present: boolean, col: 2 | 3, name: string): number[][] | null => {
    if (!present) return null;
    const out: number[][] = tsOrder.map(() => new Array<number>(L).fill(NaN));
    for (let i = 0; i < rows.length; i++) {
      const raw = rows[i][col];
      if (raw === "") {
        throw new SchemaError(`${path}: row ${i + 3} is missing a ${name} value present elsewhere`);
      }
      const v = Number(raw);
      if (!Number.isFinite(v)) throw new SchemaError(`${path}: bad ${name} value ${JSON.stringify(raw)}`);
      if (v < RHO_MIN || v > RHO_MAX) {
        throw new SchemaError(
          `${path}: row ${i + 3}: ${name} = ${v} outside [${RHO_MIN}, ${RHO_MAX}]`,
        );
      }
      const x = Number(rows[i][0]);
      const it = tIndex.get(Number(rows[i][1]))!;
      if (!Number.isNaN(out[it][x])) {
        throw new SchemaError(`${path}: duplicate cell (x=${x}, t=${rows[i][1]})`);
      }
      out[it][x] = v;
    }
    return out;
  };

  return {
    L,
    ts: tsOrder,
    naive: grid(hasNaive, 2, "rho_naive"),
    fast: grid(hasFast, 3, "rho_fast"),
  };
}
