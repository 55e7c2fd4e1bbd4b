#!/usr/bin/env node
import { SchemaError } from "./csv.js";
import { renderOnePoint } from "./render.js";

const USAGE = "usage: bethe-ring-plot <input.csv> <output.svg> [--surface] [--diff]";

/** Entry point; returns the process exit code. */
export function main(argv: string[]): number {
  const flags = new Set(argv.filter((a) => a.startsWith("--")));
  const positional = argv.filter((a) => !a.startsWith("--"));
  for (const f of flags) {
    if (f !== "--surface" && f !== "--diff") {
      console.error(`unknown flag ${f}\n${USAGE}`);
      return 2;
    }
  }
  if (positional.length !== 2) {
    console.error(USAGE);
    return 2;
  }
  try {
    const summary = renderOnePoint(positional[0], positional[1], {
      surface: flags.has("--surface"),
      diff: flags.has("--diff"),
    });
    let msg = `rendered ${summary.L} sites x ${summary.timePoints} time points ` +
      `(${summary.method}) -> ${summary.outPath}`;
    if (summary.maxGap !== null) msg += `  max |naive - fast| = ${summary.maxGap.toExponential(3)}`;
    console.log(msg);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 3;
    }
    console.error(String(err));
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
