import { BigramModel } from "./bigram.js";

export interface ScoreRequest {
  tokens: string[];
  prefix: string[];
  candidates: string[];
}

export interface Backend {
  score(request: ScoreRequest): number[];
}

export class UniformBackend implements Backend {
  score(request: ScoreRequest): number[] {
    return request.candidates.map(() => 0);
  }
}

export class BigramBackend implements Backend {
  constructor(private model: BigramModel) {}

  score(request: ScoreRequest): number[] {
    return request.candidates.map((c) => this.model.scoreCandidate(request.prefix, c));
  }
}

export function parseRequest(line: string): ScoreRequest {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch {
    throw new Error("request is not valid JSON");
  }
  const obj = parsed as Record<string, unknown>;
  for (const field of ["tokens", "prefix", "candidates"] as const) {
    const value = obj[field];
    if (!Array.isArray(value) || !value.every((x) => typeof x === "string")) {
      throw new Error(`request field "${field}" must be an array of strings`);
    }
  }
  return {
    tokens: obj.tokens as string[],
    prefix: obj.prefix as string[],
    candidates: obj.candidates as string[],
  };
}
