import { describe, expect, it } from "vitest";

import { BigramModel, BOS } from "./bigram.js";

describe("BigramModel", () => {
  it("counts bigrams with add-one smoothing", () => {
    const m = new BigramModel();
    m.trainLine("a b a b c");
    // vocabulary {a,b,c} + unk share = 4
    // after "a": b twice, total 2 -> P(b|a) = 3/6
    expect(m.logProb("a", "b")).toBeCloseTo(Math.log(3 / 6), 10);
    // unseen continuation gets the smoothed floor
    expect(m.logProb("a", "c")).toBeCloseTo(Math.log(1 / 6), 10);
    // unseen context: uniform over vocabulary + unk
    expect(m.logProb("zz", "a")).toBeCloseTo(Math.log(1 / 4), 10);
  });

  it("uses the start symbol for empty prefixes", () => {
    const m = new BigramModel();
    m.trainLine("x y");
    m.trainLine("x z");
    expect(m.scoreCandidate([], "x")).toBeCloseTo(m.logProb(BOS, "x"), 10);
  });

  it("scores multi-part candidates by chained sums", () => {
    const m = new BigramModel();
    m.trainLine("a b c");
    const whole = m.scoreCandidate(["a"], "b c");
    expect(whole).toBeCloseTo(m.logProb("a", "b") + m.logProb("b", "c"), 10);
  });

  it("prefers seen continuations over unseen ones", () => {
    const m = new BigramModel();
    for (let i = 0; i < 20; i++) m.trainLine("the cat sat");
    expect(m.scoreCandidate(["the"], "cat")).toBeGreaterThan(m.scoreCandidate(["the"], "sat"));
  });

  it("ranks gold continuations above chance on held-in sequences", () => {
    const m = new BigramModel();
    const lines = [
      "`` alpha '' is a person ; `` beta '' is a location .",
      "`` gamma '' is a person .",
      "no entities .",
    ];
    m.trainLines(lines);
    // gold next after "is a" is "person" twice out of three sequences
    const candidates = ["person", "location", "organization", "``"];
    const scores = candidates.map((c) => m.scoreCandidate(["is", "a"], c));
    const best = candidates[scores.indexOf(Math.max(...scores))];
    expect(best).toBe("person");
  });
});
