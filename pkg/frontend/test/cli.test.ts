import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { RECORD_COLUMNS } from "../src/csv.js";

const pkgRoot = fileURLToPath(new URL("..", import.meta.url));
const tmp = mkdtempSync(join(tmpdir(), "qprobe-figures-"));

afterAll(() => {
  rmSync(tmp, { recursive: true, force: true });
});

function writeSpec(name: string, lines: string[]): string {
  const path = join(tmp, name);
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
  return path;
}

const golden = (name: string) => join(pkgRoot, "testdata", name);

describe("figure cli", () => {
  it("renders a scatter figure to the spec output path", () => {
    const out = join(tmp, "scatter.svg");
    const spec = writeSpec("scatter.figspec", [
      "kind = coeff-scatter",
      `output = ${out}`,
      `layer = ${golden("records-full.csv")}`,
    ]);
    expect(main([spec])).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("lets a positional output override the spec", () => {
    const specOut = join(tmp, "ignored.svg");
    const cliOut = join(tmp, "chosen.svg");
    const spec = writeSpec("override.figspec", [
      "kind = cnot-curve",
      `output = ${specOut}`,
      `layer = ${golden("sweep.csv")}`,
    ]);
    expect(main([spec, cliOut])).toBe(0);
    expect(existsSync(cliOut)).toBe(true);
    expect(existsSync(specOut)).toBe(false);
  });

  it("rejects an empty record csv and writes nothing", () => {
    const emptyCsv = join(tmp, "empty.csv");
    writeFileSync(emptyCsv, RECORD_COLUMNS.join(",") + "\n", "utf-8");
    const out = join(tmp, "never.svg");
    const spec = writeSpec("empty.figspec", [
      "kind = coeff-scatter",
      `output = ${out}`,
      `layer = ${emptyCsv}`,
    ]);
    expect(main([spec])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("returns the usage code for bad invocations", () => {
    expect(main([])).toBe(2);
    expect(main(["a", "b", "c"])).toBe(2);
    expect(main(["--help"])).toBe(2);
  });

  it("requires an output path from the spec or the command line", () => {
    const spec = writeSpec("noout.figspec", [
      "kind = cnot-curve",
      `layer = ${golden("sweep.csv")}`,
    ]);
    expect(main([spec])).toBe(2);
  });

  it("reports malformed specs as validation failures", () => {
    const spec = writeSpec("bad.figspec", ["kind = pie", "layer = a.csv"]);
    expect(main([spec, join(tmp, "x.svg")])).toBe(1);
  });

  it("maps missing files to the io code", () => {
    expect(main([join(tmp, "absent.figspec")])).toBe(3);
    const spec = writeSpec("gone.figspec", [
      "kind = cnot-curve",
      `layer = ${join(tmp, "absent.csv")}`,
    ]);
    expect(main([spec, join(tmp, "y.svg")])).toBe(3);
  });
});

describe("shipped figure specs", () => {
  // the bundled specs use paths relative to the package root, so run the
  // built executable there instead of chdir-ing the test worker
  it.each([
    ["coeff-three-tone.figspec", "<circle"],
    ["tradeoff-mu-half.figspec", "<circle"],
    ["hist-full.figspec", "<rect"],
    ["cnot-sweep.figspec", "<polyline"],
  ])("renders %s", (name, marker) => {
    const out = join(tmp, name.replace(".figspec", ".svg"));
    execFileSync(
      process.execPath,
      [join(pkgRoot, "dist", "cli.js"), join("figspecs", name), out],
      { cwd: pkgRoot },
    );
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain(marker);
  });
});
