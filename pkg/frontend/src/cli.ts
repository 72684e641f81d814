/** CLI: `plot --csv <path> --x sweep_value --out <svg> [--linear-y]` */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { buildModel } from "./model.js";
import { NoDataError, parseCsv, SchemaError } from "./schema.js";
import { render } from "./svg.js";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        csv: { type: "string" },
        x: { type: "string", default: "sweep_value" },
        out: { type: "string" },
        "linear-y": { type: "boolean", default: false },
      },
    });
  } catch (err) {
    process.stderr.write(`argument error: ${(err as Error).message}\n`);
    return 2;
  }
  const command = args.positionals[0];
  const { csv, x, out } = args.values;
  if (command !== "plot" || !csv || !out) {
    process.stderr.write(
      "usage: plot --csv <path> --x sweep_value --out <svg> [--linear-y]\n",
    );
    return 2;
  }
  if (x !== "sweep_value" && x !== "trials") {
    process.stderr.write(`unknown x column: ${x}\n`);
    return 2;
  }

  let text: string;
  try {
    text = readFileSync(csv, "utf-8");
  } catch (err) {
    process.stderr.write(`cannot read ${csv}: ${(err as Error).message}\n`);
    return 3;
  }
  try {
    const rows = parseCsv(text);
    const model = buildModel(rows, { x, logY: !args.values["linear-y"] });
    writeFileSync(out, render(model).svg, "utf-8");
  } catch (err) {
    if (err instanceof SchemaError || err instanceof NoDataError) {
      process.stderr.write(`${err.message}\n`);
      return 2;
    }
    process.stderr.write(`${(err as Error).message}\n`);
    return 3;
  }
  return 0;
}

if (process.argv[1] && /cli\.[cm]?js$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
