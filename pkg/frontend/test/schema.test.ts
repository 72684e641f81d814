import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  EXPECTED_HEADER,
  NoDataError,
  parseCsv,
  SchemaError,
} from "../src/schema.js";

const fixture = (name: string): string =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");

describe("parseCsv", () => {
  it("parses the sweep fixture with full precision", () => {
    const rows = parseCsv(fixture("multivariate_s_sweep.csv"));
    expect(rows).toHaveLength(50);
    const r = rows[0]!;
    expect(r.sweepParam).toBe("s");
    expect(r.sweepValue).toBe(0);
    expect(r.trials).toBe(40);
    expect(r.minGap).toBeCloseTo(0.14409349039978656, 17);
    expect(r.wallMs).toBeNull();
  });

  it("parses degenerate (no sweep) rows with null sweep values", () => {
    const rows = parseCsv(fixture("malicious.csv"));
    expect(rows).toHaveLength(3);
    expect(rows[0]!.sweepValue).toBeNull();
    expect(rows[0]!.sweepParam).toBe("");
    expect(rows[2]!.errorRate).toBe(1);
  });

  it("rejects a wrong header and lists the expected one", () => {
    expect(() => parseCsv("a,b,c\n1,2,3\n")).toThrowError(SchemaError);
    expect(() => parseCsv("a,b,c\n1,2,3\n")).toThrowError(
      EXPECTED_HEADER.join(","),
    );
  });

  it("rejects a header-only file", () => {
    expect(() => parseCsv(EXPECTED_HEADER.join(",") + "\n")).toThrowError(
      NoDataError,
    );
  });

  it("rejects rows with the wrong field count", () => {
    const bad = EXPECTED_HEADER.join(",") + "\nx,s,1,g_bai,10\n";
    expect(() => parseCsv(bad)).toThrowError(/expected 11 fields/);
  });
});
