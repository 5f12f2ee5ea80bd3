/**
 * Command line: qprobe-figures <figure-spec> [output]
 *
 * The output argument overrides the spec file's `output` key; one of
 * the two must be present. Exit codes mirror the producer CLI: 0
 * success, 1 validation failure, 2 usage error, 3 I/O error.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { CsvError } from "./csv.js";
import { parseFigureSpec, SpecError } from "./figspec.js";
import { renderFigure, RenderError } from "./render.js";

const USAGE = "usage: qprobe-figures <figure-spec> [output]";

export function main(argv: string[]): number {
  if (argv.length < 1 || argv.length > 2 || argv[0] === "--help") {
    console.error(USAGE);
    return 2;
  }
  const specPath = argv[0]!;
  try {
    const spec = parseFigureSpec(readFileSync(specPath, "utf-8"), specPath);
    const output = argv[1] ?? spec.output;
    if (output === undefined) {
      console.error(`${specPath}: no output path (set output in the spec or pass one)`);
      return 2;
    }
    const svg = renderFigure(spec, (path) => readFileSync(path, "utf-8"));
    writeFileSync(output, svg, "utf-8");
    return 0;
  } catch (err) {
    if (err instanceof SpecError || err instanceof CsvError || err instanceof RenderError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    throw err;
  }
}

if (process.argv[1] !== undefined && import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
