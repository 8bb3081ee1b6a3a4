/** `plots render --kind <kind> --in <path> --out <path.svg>` */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { KINDS, Kind, render } from "./render.js";
import { SchemaError } from "./schema.js";

function parseArgs(argv: string[]): { kind: Kind; input: string; output: string } {
  if (argv[0] !== "render") {
    throw new Error(`unknown command '${argv[0] ?? ""}'; usage: plots render --kind K --in F --out F.svg`);
  }
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(`bad argument '${flag}'`);
    }
    opts.set(flag.slice(2), value);
  }
  const kind = opts.get("kind");
  const input = opts.get("in");
  const output = opts.get("out");
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (!input || !output) {
    throw new Error("--in and --out are required");
  }
  return { kind: kind as Kind, input, output };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const text = readFileSync(args.input, "utf8");
    const svg = render(args.kind, text, basename(args.input));
    writeFileSync(args.output, svg);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}
