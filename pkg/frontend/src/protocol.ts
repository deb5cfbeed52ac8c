/**
 * Newline-delimited JSON worker loop.
 *
 * One request object per input line; one response object per output line,
 * scores aligned with the requested candidates.  A malformed request yields
 * an error object and the loop continues; end of input ends the loop.
 */
import * as readline from "node:readline";
import type { Readable, Writable } from "node:stream";

import { Backend, parseRequest } from "./backends.js";

export async function serve(input: Readable, output: Writable, backend: Backend): Promise<void> {
  const rl = readline.createInterface({ input, crlfDelay: Infinity });
  for await (const line of rl) {
    if (line.trim().length === 0) continue;
    let payload: string;
    try {
      const request = parseRequest(line);
      const scores = backend.score(request);
      if (scores.length !== request.candidates.length || scores.some((s) => !Number.isFinite(s))) {
        throw new Error("backend produced a misaligned or non-finite score vector");
      }
      payload = JSON.stringify({ scores });
    } catch (err) {
      payload = JSON.stringify({ error: err instanceof Error ? err.message : String(err) });
    }
    if (!output.write(payload + "\n")) {
      await new Promise<void>((resolve) => output.once("drain", () => resolve()));
    }
  }
}
