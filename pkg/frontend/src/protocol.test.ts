import { PassThrough } from "node:stream";
import { describe, expect, it } from "vitest";

import { BigramBackend, UniformBackend, parseRequest } from "./backends.js";
import { BigramModel } from "./bigram.js";
import { serve } from "./protocol.js";

async function roundtrip(lines: string[], backend = new UniformBackend()): Promise<string[]> {
  const input = new PassThrough();
  const output = new PassThrough();
  const done = serve(input, output, backend);
  for (const line of lines) input.write(line + "\n");
  input.end();
  await done;
  output.end();
  const chunks: Buffer[] = [];
  for await (const chunk of output) chunks.push(chunk as Buffer);
  return Buffer.concat(chunks)
    .toString("utf-8")
    .split("\n")
    .filter((l) => l.length > 0);
}

describe("parseRequest", () => {
  it("accepts a well-formed request", () => {
    const req = parseRequest('{"tokens":["a"],"prefix":[],"candidates":["x","y"]}');
    expect(req.candidates).toEqual(["x", "y"]);
  });

  it("rejects missing fields", () => {
    expect(() => parseRequest('{"tokens":["a"],"prefix":[]}')).toThrow(/candidates/);
  });

  it("rejects non-string entries", () => {
    expect(() => parseRequest('{"tokens":["a"],"prefix":[1],"candidates":[]}')).toThrow(/prefix/);
  });
});

describe("serve", () => {
  it("aligns responses with requested candidates, in order", async () => {
    const requests = [
      '{"tokens":["a","b"],"prefix":[],"candidates":["x","y","z"]}',
      '{"tokens":["a","b"],"prefix":["x"],"candidates":["q"]}',
    ];
    const out = await roundtrip(requests);
    expect(out).toHaveLength(2);
    expect(JSON.parse(out[0])).toEqual({ scores: [0, 0, 0] });
    expect(JSON.parse(out[1])).toEqual({ scores: [0] });
  });

  it("emits an error object for a malformed line and keeps serving", async () => {
    const out = await roundtrip([
      "this is not json",
      '{"tokens":[],"prefix":[],"candidates":["a"]}',
    ]);
    expect(out).toHaveLength(2);
    expect(JSON.parse(out[0])).toHaveProperty("error");
    expect(JSON.parse(out[1])).toEqual({ scores: [0] });
  });

  it("finishes cleanly at end of input", async () => {
    const out = await roundtrip([]);
    expect(out).toHaveLength(0);
  });

  it("serves bigram scores", async () => {
    const model = new BigramModel();
    model.trainLine("a b");
    const out = await roundtrip(
      ['{"tokens":[],"prefix":["a"],"candidates":["b","zz"]}'],
      new BigramBackend(model),
    );
    const scores = JSON.parse(out[0]).scores as number[];
    expect(scores[0]).toBeGreaterThan(scores[1]);
  });
});
