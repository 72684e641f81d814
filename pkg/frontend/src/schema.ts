/** CSV schema shared with the experiment harness. */

export const EXPECTED_HEADER = [
  "instance",
  "sweep_param",
  "sweep_value",
  "algorithm",
  "trials",
  "errors",
  "error_rate",
  "ci_low",
  "ci_high",
  "min_gap",
  "wall_ms",
] as const;

export interface Row {
  instance: string;
  sweepParam: string;
  /** null for degenerate (non-sweep) runs */
  sweepValue: number | null;
  algorithm: string;
  trials: number;
  errors: number | null;
  /** null when the sweep point failed to build */
  errorRate: number | null;
  ciLow: number | null;
  ciHigh: number | null;
  minGap: number | null;
  wallMs: number | null;
}

export class SchemaError extends Error {}
export class NoDataError extends Error {}

function num(field: string | undefined): number | null {
  if (field === undefined || field === "") return null;
  const v = Number(field);
  if (Number.isNaN(v)) {
    throw new SchemaError(`non-numeric field: ${JSON.stringify(field)}`);
  }
  return v;
}

/** Parse harness CSV text; throws SchemaError / NoDataError. */
export function parseCsv(text: string): Row[] {
  const lines = text.split("\n").filter((l) => l.length > 0);
  const header = lines[0];
  if (header !== EXPECTED_HEADER.join(",")) {
    throw new SchemaError(
      `unexpected CSV header; expected: ${EXPECTED_HEADER.join(",")}`,
    );
  }
  if (lines.length < 2) {
    throw new NoDataError("CSV contains a header but no data rows");
  }
  return lines.slice(1).map((line, i) => {
    const f = line.split(",");
    if (f.length !== EXPECTED_HEADER.length) {
      throw new SchemaError(
        `row ${i + 1}: expected ${EXPECTED_HEADER.length} fields, ` +
          `got ${f.length}`,
      );
    }
    const trials = num(f[4]);
    if (trials === null || trials < 1) {
      throw new SchemaError(`row ${i + 1}: invalid trials field`);
    }
    return {
      instance: f[0]!,
      sweepParam: f[1]!,
      sweepValue: num(f[2]),
      algorithm: f[3]!,
      trials,
      errors: num(f[5]),
      errorRate: num(f[6]),
      ciLow: num(f[7]),
      ciHigh: num(f[8]),
      minGap: num(f[9]),
      wallMs: num(f[10]),
    };
  });
}
