/**
 * Bigram language model over output-symbol sequences with add-one smoothing.
 *
 * Training input is one sequence per line, symbols separated by spaces (the
 * format the batch linearizer emits).  Scores are log probabilities; a
 * candidate made of several whitespace-separated parts is scored by the
 * chain-rule sum of its parts.
 */

export const BOS = "<s>";

export class BigramModel {
  private counts = new Map<string, Map<string, number>>();
  private totals = new Map<string, number>();
  private vocab = new Set<string>();

  trainLine(line: string): void {
    const symbols = line.trim().split(/\s+/).filter((s) => s.length > 0);
    if (symbols.length === 0) return;
    let prev = BOS;
    for (const sym of symbols) {
      this.vocab.add(sym);
      const row = this.counts.get(prev) ?? new Map<string, number>();
      row.set(sym, (row.get(sym) ?? 0) + 1);
      this.counts.set(prev, row);
      this.totals.set(prev, (this.totals.get(prev) ?? 0) + 1);
      prev = sym;
    }
  }

  trainLines(lines: Iterable<string>): void {
    for (const line of lines) this.trainLine(line);
  }

  get vocabularySize(): number {
    return this.vocab.size + 1; // one share reserved for unseen symbols
  }

  /** log P(next | prev) with add-one smoothing. */
  logProb(prev: string, next: string): number {
    const count = this.counts.get(prev)?.get(next) ?? 0;
    const total = this.totals.get(prev) ?? 0;
    return Math.log(count + 1) - Math.log(total + this.vocabularySize);
  }

  /** Sum of part log-probabilities for a possibly multi-part candidate. */
  scoreCandidate(prefix: string[], candidate: string): number {
    let prev = prefix.length > 0 ? prefix[prefix.length - 1] : BOS;
    let total = 0;
    for (const part of candidate.split(/\s+/).filter((s) => s.length > 0)) {
      total += this.logProb(prev, part);
      prev = part;
    }
    return total;
  }
}
