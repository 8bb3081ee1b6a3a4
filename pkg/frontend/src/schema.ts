/**
 * Parsers for the CLI output files (see ../../docs/formats.md).
 * Schema violations throw SchemaError naming the offending field.
 */

export class SchemaError extends Error {
  constructor(file: string, field: string, detail: string) {
    super(`${file}: field '${field}': ${detail}`);
    this.name = "SchemaError";
  }
}

/** Scalars are either "num/den" rationals or %.17g floats. */
export function parseScalar(text: string, file: string, field: string): number {
  const t = text.trim();
  if (/^-?\d+\/\d+$/.test(t)) {
    const [num, den] = t.split("/");
    const d = Number(den);
    if (d === 0) throw new SchemaError(file, field, "zero denominator");
    return Number(num) / d;
  }
  const v = Number(t);
  if (t === "" || Number.isNaN(v)) {
    throw new SchemaError(file, field, `not a number or rational: '${text}'`);
  }
  return v;
}

export interface MomentRow {
  n: number;
  oracle: string;
  value: number;
  error: number;
}

const MOMENT_ORACLES = new Set(["wreath", "path_sum", "animal", "mc"]);

export function parseMomentsCsv(text: string, file = "moments.csv"): MomentRow[] {
  const lines = text.trim().split("\n");
  if (lines[0] !== "n,oracle,value,error") {
    throw new SchemaError(file, "header", `expected 'n,oracle,value,error', got '${lines[0]}'`);
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== 4) {
      throw new SchemaError(file, `row ${i + 1}`, `expected 4 columns, got ${parts.length}`);
    }
    const n = Number(parts[0]);
    if (!Number.isInteger(n) || n < 0) {
      throw new SchemaError(file, "n", `expected nonnegative integer, got '${parts[0]}'`);
    }
    if (!MOMENT_ORACLES.has(parts[1])) {
      throw new SchemaError(file, "oracle", `unknown oracle '${parts[1]}'`);
    }
    return {
      n,
      oracle: parts[1],
      value: parseScalar(parts[2], file, "value"),
      error: parseScalar(parts[3], file, "error"),
    };
  });
}

export interface LambdaPoint {
  index: number;
  value: number;
}

export function parseLambdaCsv(text: string, file = "lambda.csv"): LambdaPoint[] {
  const lines = text.trim().split("\n");
  if (lines[0] !== "index,value") {
    throw new SchemaError(file, "header", `expected 'index,value', got '${lines[0]}'`);
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== 2) {
      throw new SchemaError(file, `row ${i + 1}`, `expected 2 columns, got ${parts.length}`);
    }
    const index = Number(parts[0]);
    if (!Number.isInteger(index)) {
      throw new SchemaError(file, "index", `expected integer, got '${parts[0]}'`);
    }
    return { index, value: parseScalar(parts[1], file, "value") };
  });
}

export interface IdsAtom {
  value: number;
  mass: number;
}

export interface IdsMeasure {
  atoms: IdsAtom[];
  unaccountedMass: number;
}

export function parseIdsJson(text: string, file = "ids.json"): IdsMeasure {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new SchemaError(file, "(root)", "not valid JSON");
  }
  const obj = raw as Record<string, unknown>;
  if (!Array.isArray(obj.atoms)) {
    throw new SchemaError(file, "atoms", "expected an array");
  }
  const atoms = obj.atoms.map((a, i) => {
    const at = a as Record<string, unknown>;
    if (typeof at.value !== "number") {
      throw new SchemaError(file, `atoms[${i}].value`, "expected a number");
    }
    if (typeof at.mass !== "number" || at.mass < 0) {
      throw new SchemaError(file, `atoms[${i}].mass`, "expected a nonnegative number");
    }
    return { value: at.value, mass: at.mass };
  });
  if (typeof obj.unaccountedMass !== "number") {
    throw new SchemaError(file, "unaccountedMass", "expected a number");
  }
  return { atoms, unaccountedMass: obj.unaccountedMass };
}

export interface ReportRow {
  n: number;
  wreath: number;
  mcMean: number;
  mcStderr: number;
}

export function parseReportJson(text: string, file = "report.json"): ReportRow[] {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new SchemaError(file, "(root)", "not valid JSON");
  }
  const obj = raw as Record<string, unknown>;
  if (!Array.isArray(obj.rows)) {
    throw new SchemaError(file, "rows", "expected an array");
  }
  return obj.rows.map((r, i) => {
    const row = r as Record<string, unknown>;
    if (typeof row.n !== "number") {
      throw new SchemaError(file, `rows[${i}].n`, "expected a number");
    }
    for (const key of ["wreath", "mcMean", "mcStderr"]) {
      if (typeof row[key] !== "string") {
        throw new SchemaError(file, `rows[${i}].${key}`, "expected a scalar string");
      }
    }
    return {
      n: row.n,
      wreath: parseScalar(row.wreath as string, file, `rows[${i}].wreath`),
      mcMean: parseScalar(row.mcMean as string, file, `rows[${i}].mcMean`),
      mcStderr: parseScalar(row.mcStderr as string, file, `rows[${i}].mcStderr`),
    };
  });
}
