#!/usr/bin/env node
/**
 * Scorer worker: reads score requests from stdin, writes one response per
 * line to stdout.
 *
 *   node dist/serve.js --backend uniform
 *   node dist/serve.js --backend bigram --train sequences.txt
 *
 * The training file holds one space-joined symbol sequence per line.
 */
import * as fs from "node:fs";

import { Backend, BigramBackend, UniformBackend } from "./backends.js";
import { BigramModel } from "./bigram.js";
import { serve } from "./protocol.js";

function parseArgs(argv: string[]): { backend: string; train?: string } {
  const out: { backend: string; train?: string } = { backend: "uniform" };
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--backend") out.backend = argv[++i];
    else if (argv[i] === "--train") out.train = argv[++i];
    else {
      process.stderr.write(`unknown argument: ${argv[i]}\n`);
      process.exit(2);
    }
  }
  return out;
}

function buildBackend(args: { backend: string; train?: string }): Backend {
  if (args.backend === "uniform") return new UniformBackend();
  if (args.backend === "bigram") {
    if (!args.train) {
      process.stderr.write("--backend bigram requires --train <file>\n");
      process.exit(2);
    }
    const model = new BigramModel();
    model.trainLines(fs.readFileSync(args.train, "utf-8").split("\n"));
    return new BigramBackend(model);
  }
  process.stderr.write(`unknown backend: ${args.backend}\n`);
  process.exit(2);
}

const backend = buildBackend(parseArgs(process.argv.slice(2)));
serve(process.stdin, process.stdout, backend).then(
  () => process.exit(0),
  (err) => {
    process.stderr.write(String(err) + "\n");
    process.exit(1);
  },
);
