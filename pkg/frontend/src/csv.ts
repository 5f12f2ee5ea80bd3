/**
 * Readers for the qprobe CSV interfaces. Every loader re-validates the
 * physical invariants instead of trusting the producer, so schema or
 * math drift across the language boundary fails loudly at load time.
 */

export const RECORD_COLUMNS = [
  "scenario",
  "seed",
  "index",
  "mu",
  "theta",
  "phi",
  "a1",
  "a2",
  "a3",
  "alpha",
  "beta",
  "a0",
  "ax",
  "ay",
  "az",
  "abs_a",
  "F",
  "G",
  "T",
] as const;

export const SWEEP_COLUMNS = ["theta", "F", "G", "T"] as const;
export const HIST_COLUMNS = ["g_lo", "g_hi", "f_lo", "f_hi", "count"] as const;

export const TRADEOFF_BOUND = 1 / 9;
export const G_RANGE: readonly [number, number] = [0.5, 5 / 6];
export const F_RANGE: readonly [number, number] = [2 / 3, 1];

// physical constraints get a loose tolerance (well under a marker
// radius in data units); derived-column consistency a strict one
const CONSTRAINT_TOL = 1e-9;
const RECOMPUTE_TOL = 1e-12;

export interface SampleRecord {
  scenario: string;
  seed: number;
  index: number;
  mu: number;
  theta: number;
  phi: number;
  a1: number;
  a2: number;
  a3: number;
  alpha: number;
  beta: number;
  a0: number;
  ax: number;
  ay: number;
  az: number;
  absA: number;
  F: number;
  G: number;
  T: number;
}

export interface SweepRow {
  theta: number;
  F: number;
  G: number;
  T: number;
}

export interface HistCell {
  gLo: number;
  gHi: number;
  fLo: number;
  fHi: number;
  count: number;
}

export class CsvError extends Error {}

function dataLines(text: string, source: string, header: readonly string[]): string[][] {
  const lines = text.split(/\r?\n/);
  const first = lines[0];
  if (first === undefined || first.split(",").join(",") !== header.join(",")) {
    throw new CsvError(`${source}: header does not match ${header.join(",")}`);
  }
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line === "") continue;
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new CsvError(
        `${source}:${i + 1}: expected ${header.length} fields, got ${parts.length}`,
      );
    }
    rows.push(parts);
  }
  if (rows.length === 0) {
    throw new CsvError(`${source}: no data rows`);
  }
  return rows;
}

function num(field: string | undefined, where: string): number {
  if (field === undefined || field.trim() === "") {
    throw new CsvError(`${where}: empty numeric field`);
  }
  const value = Number(field);
  if (!Number.isFinite(value)) {
    throw new CsvError(`${where}: not a finite number: ${field}`);
  }
  return value;
}

export function tradeoffOf(g: number, f: number): number {
  return (f - 2 / 3) ** 2 + 4 * (g - 1 / 2) ** 2;
}

function checkFidelities(g: number, f: number, t: number, where: string): void {
  if (g < G_RANGE[0] - CONSTRAINT_TOL || g > G_RANGE[1] + CONSTRAINT_TOL) {
    throw new CsvError(`${where}: G = ${g} outside [1/2, 5/6]`);
  }
  if (f < F_RANGE[0] - CONSTRAINT_TOL || f > F_RANGE[1] + CONSTRAINT_TOL) {
    throw new CsvError(`${where}: F = ${f} outside [2/3, 1]`);
  }
  if (t > TRADEOFF_BOUND + CONSTRAINT_TOL) {
    throw new CsvError(`${where}: T = ${t} exceeds the 1/9 bound`);
  }
  if (Math.abs(tradeoffOf(g, f) - t) > RECOMPUTE_TOL) {
    throw new CsvError(`${where}: T does not match its recomputation from (G, F)`);
  }
}

export function parseRecordsCsv(text: string, source: string): SampleRecord[] {
  const rows = dataLines(text, source, RECORD_COLUMNS);
  return rows.map((parts, i) => {
    const where = `${source}:${i + 2}`;
    const [scenario, seedField, indexField, ...rest] = parts;
    const numeric = rest.map((field) => num(field, where));
    const [mu, theta, phi, a1, a2, a3, alpha, beta, a0, ax, ay, az, absA, F, G, T] =
      numeric as [
        number, number, number, number, number, number, number, number,
        number, number, number, number, number, number, number, number,
      ];
    const record: SampleRecord = {
      scenario: scenario ?? "",
      seed: num(seedField, where),
      index: num(indexField, where),
      mu, theta, phi, a1, a2, a3, alpha, beta, a0, ax, ay, az, absA, F, G, T,
    };
    if (Math.abs(Math.hypot(ax, ay, az) - absA) > RECOMPUTE_TOL) {
      throw new CsvError(`${where}: abs_a does not match its components`);
    }
    if (absA > 0.5 + CONSTRAINT_TOL || absA > a0 + CONSTRAINT_TOL || a0 > 1 - absA + CONSTRAINT_TOL) {
      throw new CsvError(`${where}: effect coefficients violate positivity`);
    }
    checkFidelities(G, F, T, where);
    return record;
  });
}

export function parseSweepCsv(text: string, source: string): SweepRow[] {
  const rows = dataLines(text, source, SWEEP_COLUMNS);
  return rows.map((parts, i) => {
    const where = `${source}:${i + 2}`;
    const theta = num(parts[0], where);
    const F = num(parts[1], where);
    const G = num(parts[2], where);
    const T = num(parts[3], where);
    if (theta < -CONSTRAINT_TOL || theta > Math.PI / 2 + CONSTRAINT_TOL) {
      throw new CsvError(`${where}: theta = ${theta} outside [0, pi/2]`);
    }
    checkFidelities(G, F, T, where);
    return { theta, F, G, T };
  });
}

export function parseHistCsv(text: string, source: string): HistCell[] {
  const rows = dataLines(text, source, HIST_COLUMNS);
  return rows.map((parts, i) => {
    const where = `${source}:${i + 2}`;
    const cell: HistCell = {
      gLo: num(parts[0], where),
      gHi: num(parts[1], where),
      fLo: num(parts[2], where),
      fHi: num(parts[3], where),
      count: num(parts[4], where),
    };
    if (!(cell.gLo < cell.gHi) || !(cell.fLo < cell.fHi)) {
      throw new CsvError(`${where}: degenerate bin edges`);
    }
    if (!Number.isInteger(cell.count) || cell.count < 0) {
      throw new CsvError(`${where}: count must be a nonnegative integer`);
    }
    return cell;
  });
}
