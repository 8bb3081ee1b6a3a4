/** The four figure kinds, each a pure function from parsed data to SVG text. */

import {
  IdsMeasure,
  LambdaPoint,
  MomentRow,
  ReportRow,
  SchemaError,
  parseIdsJson,
  parseLambdaCsv,
  parseMomentsCsv,
  parseReportJson,
} from "./schema.js";
import { HEIGHT, MARGIN, Svg, WIDTH, frame } from "./svg.js";

export const KINDS = ["ids-cdf", "lambda-scatter", "moment-compare", "mc-convergence"] as const;
export type Kind = (typeof KINDS)[number];

const ORACLE_COLORS: Record<string, string> = {
  wreath: "#1f77b4",
  path_sum: "#ff7f0e",
  animal: "#2ca02c",
  mc: "#d62728",
};

export function renderIdsCdf(ids: IdsMeasure): string {
  const svg = new Svg();
  const { sx, sy } = frame(svg, -1, 1, 0, 1, "eigenvalue", "CDF", "integrated density of states");
  // unaccounted truncation mass as a band at the top of the CDF
  const bandTop = sy(1);
  const bandBottom = sy(1 - ids.unaccountedMass);
  if (ids.unaccountedMass > 0) {
    svg.rect(sx(-1), bandTop, sx(1) - sx(-1), bandBottom - bandTop, "#cccccc", 0.6);
  }
  let acc = 0;
  let prevX = sx(-1);
  let prevY = sy(0);
  const pts: Array<[number, number]> = [[prevX, prevY]];
  for (const atom of ids.atoms) {
    const x = sx(atom.value);
    pts.push([x, prevY]);
    acc += atom.mass;
    prevY = sy(acc);
    pts.push([x, prevY]);
    prevX = x;
  }
  pts.push([sx(1), prevY]);
  svg.path(pts, "#1f77b4", 1.5);
  return svg.toString();
}

export function renderLambdaScatter(points: LambdaPoint[]): string {
  const svg = new Svg();
  const n = Math.max(points.length - 1, 1);
  const { sx, sy } = frame(svg, 0, n, -1, 1, "rank", "eigenvalue", "point spectrum");
  for (const p of points) {
    svg.circle(sx(p.index), sy(p.value), 1.4, "#1f77b4");
  }
  return svg.toString();
}

export function renderMomentCompare(rows: MomentRow[]): string {
  const svg = new Svg();
  const nmax = Math.max(...rows.map((r) => r.n), 1);
  const vmax = Math.max(...rows.map((r) => r.value), 1e-12);
  const { sx, sy } = frame(svg, 0, nmax, 0, vmax, "moment order n", "return probability",
    "moment oracles");
  const byOracle = new Map<string, MomentRow[]>();
  for (const r of rows) {
    const list = byOracle.get(r.oracle) ?? [];
    list.push(r);
    byOracle.set(r.oracle, list);
  }
  let legendY = MARGIN.top + 8;
  for (const oracle of Object.keys(ORACLE_COLORS)) {
    const list = byOracle.get(oracle);
    if (!list) continue;
    const color = ORACLE_COLORS[oracle];
    list.sort((a, b) => a.n - b.n);
    svg.path(list.map((r) => [sx(r.n), sy(r.value)]), color, 1.2);
    for (const r of list) {
      svg.circle(sx(r.n), sy(r.value), 2.2, color);
    }
    svg.line(WIDTH - 150, legendY, WIDTH - 130, legendY, color, 2);
    svg.text(WIDTH - 124, legendY + 4, oracle, 11, "start");
    legendY += 16;
  }
  return svg.toString();
}

export function renderMcConvergence(rows: ReportRow[]): string {
  const svg = new Svg();
  const nmax = Math.max(...rows.map((r) => r.n), 1);
  const vmax = Math.max(...rows.map((r) => Math.max(r.wreath, r.mcMean + 4 * r.mcStderr)), 1e-12);
  const { sx, sy } = frame(svg, 0, nmax, 0, vmax, "moment order n", "return probability",
    "Monte Carlo vs exact, 4-sigma band");
  const sorted = [...rows].sort((a, b) => a.n - b.n);
  const upper = sorted.map((r): [number, number] => [sx(r.n), sy(r.mcMean + 4 * r.mcStderr)]);
  const lower = sorted.map((r): [number, number] => [sx(r.n), sy(Math.max(r.mcMean - 4 * r.mcStderr, 0))]);
  svg.polygon([...upper, ...lower.reverse()], "#d62728", 0.18);
  svg.path(sorted.map((r) => [sx(r.n), sy(r.mcMean)]), "#d62728", 1.2);
  svg.path(sorted.map((r) => [sx(r.n), sy(r.wreath)]), "#1f77b4", 1.2);
  for (const r of sorted) {
    svg.circle(sx(r.n), sy(r.wreath), 2.2, "#1f77b4");
  }
  svg.line(WIDTH - 150, MARGIN.top + 8, WIDTH - 130, MARGIN.top + 8, "#1f77b4", 2);
  svg.text(WIDTH - 124, MARGIN.top + 12, "exact", 11, "start");
  svg.line(WIDTH - 150, MARGIN.top + 24, WIDTH - 130, MARGIN.top + 24, "#d62728", 2);
  svg.text(WIDTH - 124, MARGIN.top + 28, "mc", 11, "start");
  return svg.toString();
}

export function render(kind: Kind, inputText: string, inputName: string): string {
  switch (kind) {
    case "ids-cdf":
      return renderIdsCdf(parseIdsJson(inputText, inputName));
    case "lambda-scatter":
      return renderLambdaScatter(parseLambdaCsv(inputText, inputName));
    case "moment-compare":
      return renderMomentCompare(parseMomentsCsv(inputText, inputName));
    case "mc-convergence":
      return renderMcConvergence(parseReportJson(inputText, inputName));
    default:
      throw new SchemaError(inputName, "kind", `unknown figure kind '${kind as string}'`);
  }
}
