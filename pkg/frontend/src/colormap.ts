/** Viridis control points (t, r, g, b) with linear interpolation between. */
const STOPS: Array<[number, number, number, number]> = [
  [0.0, 68, 1, 84],
  [0.125, 72, 40, 120],
  [0.25, 62, 74, 137],
  [0.375, 49, 104, 142],
  [0.5, 38, 130, 142],
  [0.625, 31, 158, 137],
  [0.75, 53, 183, 121],
  [0.875, 109, 205, 89],
  [1.0, 253, 231, 37],
];

/** Map v in [0,1] to a viridis hex color; values are clamped. */
export function viridis(v: number): string {
  const t = Math.min(1, Math.max(0, v));
  let lo = STOPS[0];
  let hi = STOPS[STOPS.length - 1];
  for (let i = 0; i + 1 < STOPS.length; i++) {
    if (t >= STOPS[i][0] && t <= STOPS[i + 1][0]) {
      lo = STOPS[i];
      hi = STOPS[i + 1];
      break;
    }
  }
  const f = hi[0] === lo[0] ? 0 : (t - lo[0]) / (hi[0] - lo[0]);
  const ch = (a: number, b: number) => Math.round(a + f * (b - a));
  const hex = (c: number) => c.toString(16).padStart(2, "0");
  return `#${hex(ch(lo[1], hi[1]))}${hex(ch(lo[2], hi[2]))}${hex(ch(lo[3], hi[3]))}`;
}

/** Grayscale map for difference panels. */
export function grays(v: number): string {
  const t = Math.min(1, Math.max(0, v));
  const c = Math.round(255 * (1 - t));
  const hex = c.toString(16).padStart(2, "0");
  return `#${hex}${hex}${hex}`;
}
