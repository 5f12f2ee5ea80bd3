/**
 * SVG rendering for the four figure kinds. Pure string assembly: the
 * caller supplies file contents through a reader, and all inputs are
 * parsed and validated before any output exists.
 */

import {
  parseHistCsv,
  parseRecordsCsv,
  parseSweepCsv,
  F_RANGE,
  G_RANGE,
} from "./csv.js";
import type { FigureSpec } from "./figspec.js";

export type FileReader = (path: string) => string;

export class RenderError extends Error {}

const WIDTH = 640;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 20, top: 20, bottom: 52 };
const MARKER_RADIUS = 2.5;
const BOUNDARY_COLOR = "#d62728";

interface Scale {
  x: (v: number) => number;
  y: (v: number) => number;
  xDomain: [number, number];
  yDomain: [number, number];
}

function makeScale(xDomain: [number, number], yDomain: [number, number]): Scale {
  const xSpan = WIDTH - MARGIN.left - MARGIN.right;
  const ySpan = HEIGHT - MARGIN.top - MARGIN.bottom;
  return {
    x: (v) => MARGIN.left + ((v - xDomain[0]) / (xDomain[1] - xDomain[0])) * xSpan,
    y: (v) => HEIGHT - MARGIN.bottom - ((v - yDomain[0]) / (yDomain[1] - yDomain[0])) * ySpan,
    xDomain,
    yDomain,
  };
}

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function axes(scale: Scale, xLabel: string, yLabel: string): string[] {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  for (let i = 0; i <= 4; i++) {
    const xv = scale.xDomain[0] + (i / 4) * (scale.xDomain[1] - scale.xDomain[0]);
    const yv = scale.yDomain[0] + (i / 4) * (scale.yDomain[1] - scale.yDomain[0]);
    const px = scale.x(xv);
    const py = scale.y(yv);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 18}" font-size="11" text-anchor="middle" fill="#333">${fmt(xv)}</text>`,
    );
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" font-size="11" text-anchor="end" fill="#333">${fmt(yv)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" font-size="13" text-anchor="middle" fill="#111">${xLabel}</text>`,
  );
  parts.push(
    `<text x="16" y="${(y0 + y1) / 2}" font-size="13" text-anchor="middle" fill="#111" transform="rotate(-90 16 ${(y0 + y1) / 2})">${yLabel}</text>`,
  );
  return parts;
}

function svgDocument(body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}

function polyline(points: Array<[number, number]>, scale: Scale, style: string): string {
  const coords = points
    .map(([x, y]) => `${scale.x(x).toFixed(2)},${scale.y(y).toFixed(2)}`)
    .join(" ");
  return `<polyline points="${coords}" fill="none" ${style}/>`;
}

function dots(points: Array<[number, number]>, scale: Scale, color: string): string[] {
  return points.map(
    ([x, y]) =>
      `<circle cx="${scale.x(x).toFixed(2)}" cy="${scale.y(y).toFixed(2)}" r="${MARKER_RADIUS}" fill="${color}" fill-opacity="0.55"/>`,
  );
}

function renderCoeffScatter(spec: FigureSpec, readFile: FileReader): string {
  const loaded = spec.layers.map((layer) => ({
    layer,
    records: parseRecordsCsv(readFile(layer.path), layer.path),
  }));
  const scale = makeScale([0, 1], [0, 0.55]);
  const body = axes(scale, "a0", "|a|");
  // the physical region is the triangle |a| <= a0, |a| <= 1 - a0; its
  // apex touches the |a| = 1/2 cap
  body.push(
    polyline(
      [
        [0, 0],
        [0.5, 0.5],
        [1, 0],
      ],
      scale,
      `stroke="${BOUNDARY_COLOR}" stroke-width="1.8"`,
    ),
  );
  body.push(
    polyline(
      [
        [0, 0.5],
        [1, 0.5],
      ],
      scale,
      `stroke="${BOUNDARY_COLOR}" stroke-width="1" stroke-dasharray="5,4"`,
    ),
  );
  for (const { layer, records } of loaded) {
    body.push(...dots(records.map((r) => [r.a0, r.absA]), scale, layer.color));
  }
  return svgDocument(body);
}

function boundaryCurve(): Array<[number, number]> {
  const points: Array<[number, number]> = [];
  for (let i = 0; i <= 128; i++) {
    const t = (i / 128) * (Math.PI / 2);
    points.push([0.5 + Math.sin(t) / 6, 2 / 3 + Math.cos(t) / 3]);
  }
  return points;
}

function renderTradeoffScatter(spec: FigureSpec, readFile: FileReader): string {
  const loaded = spec.layers.map((layer) => ({
    layer,
    records: parseRecordsCsv(readFile(layer.path), layer.path),
  }));
  const scale = makeScale([0.49, 0.85], [0.65, 1.01]);
  const body = axes(scale, "G", "F");
  body.push(polyline(boundaryCurve(), scale, `stroke="${BOUNDARY_COLOR}" stroke-width="1.8"`));
  for (const { layer, records } of loaded) {
    body.push(...dots(records.map((r) => [r.G, r.F]), scale, layer.color));
  }
  return svgDocument(body);
}

function hexChannel(color: string, index: number): number {
  return parseInt(color.slice(1 + 2 * index, 3 + 2 * index), 16);
}

function ramp(color: string, fraction: number): string {
  const mix = (channel: number) => Math.round(255 + (channel - 255) * fraction);
  const r = mix(hexChannel(color, 0));
  const g = mix(hexChannel(color, 1));
  const b = mix(hexChannel(color, 2));
  return `rgb(${r},${g},${b})`;
}

function renderHist(spec: FigureSpec, readFile: FileReader): string {
  if (spec.layers.length !== 1) {
    throw new RenderError("hist3d takes exactly one layer");
  }
  const layer = spec.layers[0]!;
  if (!/^#[0-9a-fA-F]{6}$/.test(layer.color)) {
    throw new RenderError(`hist3d layer color must be #rrggbb, got ${layer.color}`);
  }
  const cells = parseHistCsv(readFile(layer.path), layer.path);
  const maxCount = Math.max(...cells.map((c) => c.count));
  const scale = makeScale([G_RANGE[0], G_RANGE[1]], [F_RANGE[0], F_RANGE[1]]);
  const body: string[] = [];
  for (const cell of cells) {
    const x = scale.x(cell.gLo);
    const y = scale.y(cell.fHi);
    const w = scale.x(cell.gHi) - x;
    const h = scale.y(cell.fLo) - y;
    const fill = maxCount > 0 ? ramp(layer.color, cell.count / maxCount) : "white";
    body.push(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" height="${h.toFixed(2)}" fill="${fill}"/>`,
    );
  }
  body.push(...axes(scale, "G", "F"));
  return svgDocument(body);
}

function renderSweep(spec: FigureSpec, readFile: FileReader): string {
  const loaded = spec.layers.map((layer) => ({
    layer,
    rows: parseSweepCsv(readFile(layer.path), layer.path),
  }));
  const scale = makeScale([0, Math.PI / 2], [0.45, 1.02]);
  const body = axes(scale, "theta", "fidelity");
  for (const { layer, rows } of loaded) {
    body.push(
      polyline(rows.map((r) => [r.theta, r.F]), scale, `stroke="${layer.color}" stroke-width="1.8"`),
    );
    body.push(
      polyline(
        rows.map((r) => [r.theta, r.G]),
        scale,
        `stroke="${layer.color}" stroke-width="1.8" stroke-dasharray="6,4"`,
      ),
    );
  }
  const first = loaded[0];
  if (first !== undefined && first.rows.length > 0) {
    const last = first.rows[first.rows.length - 1]!;
    body.push(
      `<text x="${scale.x(last.theta) - 6}" y="${scale.y(last.F) - 6}" font-size="12" fill="#111">F</text>`,
    );
    body.push(
      `<text x="${scale.x(last.theta) - 6}" y="${scale.y(last.G) - 6}" font-size="12" fill="#111">G</text>`,
    );
  }
  return svgDocument(body);
}

export function renderFigure(spec: FigureSpec, readFile: FileReader): string {
  switch (spec.kind) {
    case "coeff-scatter":
      return renderCoeffScatter(spec, readFile);
    case "tradeoff-scatter":
      return renderTradeoffScatter(spec, readFile);
    case "hist3d":
      return renderHist(spec, readFile);
    case "cnot-curve":
      return renderSweep(spec, readFile);
  }
}
