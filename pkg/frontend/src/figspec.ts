/**
 * Figure-spec files: flat key/value, one figure per file.
 *
 *   kind   = coeff-scatter | tradeoff-scatter | hist3d | cnot-curve
 *   layer  = <csv-path> [color]       (repeatable, at least one)
 *   output = <image-path>             (optional; the CLI arg overrides)
 *
 * Comment lines start with '#'. Values may contain '#' freely, so
 * colors like #d62728 work; paths must not contain spaces.
 */

export const FIGURE_KINDS = [
  "coeff-scatter",
  "tradeoff-scatter",
  "hist3d",
  "cnot-curve",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureLayer {
  path: string;
  color: string;
}

export interface FigureSpec {
  kind: FigureKind;
  layers: FigureLayer[];
  output?: string;
}

export class SpecError extends Error {}

export const PALETTE = ["#1f77b4", "#9e9e9e", "#d62728", "#2ca02c", "#ff7f0e", "#8c564b"];

export function parseFigureSpec(text: string, source: string): FigureSpec {
  let kind: FigureKind | undefined;
  let output: string | undefined;
  const layers: FigureLayer[] = [];

  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = (lines[i] ?? "").trim();
    if (line === "" || line.startsWith("#")) continue;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new SpecError(`${source}:${i + 1}: expected key = value`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (key === "kind") {
      if (!(FIGURE_KINDS as readonly string[]).includes(value)) {
        throw new SpecError(
          `${source}:${i + 1}: unknown kind ${value} (expected ${FIGURE_KINDS.join(" | ")})`,
        );
      }
      kind = value as FigureKind;
    } else if (key === "output") {
      output = value;
    } else if (key === "layer") {
      const parts = value.split(/\s+/);
      const path = parts[0];
      if (path === undefined || path === "" || parts.length > 2) {
        throw new SpecError(`${source}:${i + 1}: layer takes <csv-path> [color]`);
      }
      const color = parts[1] ?? PALETTE[layers.length % PALETTE.length]!;
      layers.push({ path, color });
    } else {
      throw new SpecError(`${source}:${i + 1}: unknown key ${key}`);
    }
  }

  if (kind === undefined) {
    throw new SpecError(`${source}: missing kind`);
  }
  if (layers.length === 0) {
    throw new SpecError(`${source}: at least one layer is required`);
  }
  return output === undefined ? { kind, layers } : { kind, layers, output };
}
