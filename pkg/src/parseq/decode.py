"""Generic decoding loop coupling a schema automaton with a next-token scorer.

The scorer stands in for a neural decoder: given the sentence, the generated
prefix, and the candidate symbols, it returns one finite score per candidate.
Constrained mode draws candidates from the automaton; unconstrained mode
offers the automaton's whole vocabulary at every step.  Ties always break
toward the lowest symbol id in the automaton's frozen vocabulary ordering,
so decoding is reproducible byte-for-byte.
"""
from __future__ import annotations

import copy
import json
import math
import random
import selectors
import shlex
import subprocess
from dataclasses import dataclass, field

from .automaton import SchemaAutomaton
from .core import EOS, OutputSequence, Sentence


class DecodeError(RuntimeError):
    pass


class EmptyCandidates(DecodeError):
    """The automaton offered nothing before EOS; that is an automaton bug."""


class ScorerProtocolError(DecodeError):
    pass


@dataclass
class DecodeConfig:
    constrained: bool = True
    strategy: str = "greedy"  # greedy | sample | beam
    seed: int = 0
    beam_width: int = 1
    max_len: int | None = None  # default 16n + 32

    def __post_init__(self):
        if self.strategy not in ("greedy", "sample", "beam"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.beam_width < 1:
            raise ValueError("beam width must be >= 1")
        if self.max_len is not None and self.max_len < 1:
            raise ValueError("max_len must be >= 1")

    def budget(self, n: int) -> int:
        return self.max_len if self.max_len is not None else 16 * n + 32


class Scorer:
    """Scores candidate continuations; subclasses override score()."""

    def score(self, tokens: list[str], prefix: list[str], candidates: list[str]) -> list[float]:
        raise NotImplementedError

    def close(self):
        pass


class OracleScorer(Scorer):
    """Scores 1 for the gold next symbol, 0 otherwise.

    Raises when the gold symbol is missing from the candidate set, which is
    exactly the membership check exactness properties rely on.
    """

    def __init__(self, gold: OutputSequence):
        self.gold = gold.symbols

    def score(self, tokens, prefix, candidates):
        step = len(prefix)
        if step >= len(self.gold):
            raise ScorerProtocolError(f"decode ran past the gold sequence at step {step}")
        expected = self.gold[step]
        if expected not in candidates:
            raise ScorerProtocolError(
                f"gold symbol {expected!r} not offered at step {step} (candidates {sorted(candidates)[:8]})"
            )
        return [1.0 if c == expected else 0.0 for c in candidates]


class UniformScorer(Scorer):
    def score(self, tokens, prefix, candidates):
        return [0.0] * len(candidates)


class RandomScorer(Scorer):
    """Deterministic pseudo-random scores; fresh stream per (seed, decode)."""

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def score(self, tokens, prefix, candidates):
        return [self.rng.random() for _ in candidates]


class ExternalScorer(Scorer):
    """Bridges to a child process speaking newline-delimited JSON.

    One request object per line on the child's stdin, one response per line
    on its stdout, scores aligned with the requested candidates.
    """

    def __init__(self, command: str | list[str], timeout: float = 30.0):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self.timeout = timeout
        self._sel = selectors.DefaultSelector()
        self._sel.register(self.proc.stdout, selectors.EVENT_READ)

    def _read_line(self) -> str:
        if not self._sel.select(self.timeout):
            raise ScorerProtocolError(f"scorer timed out after {self.timeout}s")
        line = self.proc.stdout.readline()
        if not line:
            raise ScorerProtocolError("scorer process closed its output")
        return line

    def score(self, tokens, prefix, candidates):
        if self.proc.poll() is not None:
            raise ScorerProtocolError(f"scorer process exited with {self.proc.returncode}")
        request = {"tokens": list(tokens), "prefix": list(prefix), "candidates": list(candidates)}
        try:
            self.proc.stdin.write(json.dumps(request) + "\n")
            self.proc.stdin.flush()
        except BrokenPipeError as exc:
            raise ScorerProtocolError("scorer process closed its input") from exc
        line = self._read_line()
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScorerProtocolError(f"malformed scorer response: {line!r}") from exc
        if "error" in response:
            raise ScorerProtocolError(f"scorer error: {response['error']}")
        scores = response.get("scores")
        if not isinstance(scores, list) or len(scores) != len(candidates):
            raise ScorerProtocolError(
                f"response carries {len(scores) if isinstance(scores, list) else 'no'} scores "
                f"for {len(candidates)} candidates"
            )
        return [float(s) for s in scores]

    def close(self):
        try:
            if self.proc.stdin:
                self.proc.stdin.close()
            self.proc.wait(timeout=5)
        except Exception:
            self.proc.kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def oracle_scorer(gold: OutputSequence) -> OracleScorer:
    return OracleScorer(gold)


def external_scorer(command: str | list[str], timeout: float = 30.0) -> ExternalScorer:
    return ExternalScorer(command, timeout)


def _check_scores(scores: list[float], count: int):
    if len(scores) != count:
        raise ScorerProtocolError(f"{len(scores)} scores for {count} candidates")
    for s in scores:
        if not math.isfinite(s):
            raise ScorerProtocolError(f"non-finite score {s!r}")


def _ordered_candidates(cands: set[str], vocab_index: dict[str, int]) -> list[str]:
    return sorted(cands, key=lambda s: vocab_index.get(s, len(vocab_index)))


def _softmax_pick(rng: random.Random, ordered: list[str], scores: list[float]) -> str:
    m = max(scores)
    weights = [math.exp(s - m) for s in scores]
    total = sum(weights)
    r = rng.random() * total
    acc = 0.0
    for sym, w in zip(ordered, weights):
        acc += w
        if r <= acc:
            return sym
    return ordered[-1]


def decode(
    sent: Sentence,
    automaton: SchemaAutomaton,
    scorer: Scorer,
    config: DecodeConfig | None = None,
) -> OutputSequence:
    """Generate one output sequence for ``sent``.

    Constrained mode consults the automaton for candidates and keeps it
    synchronized with every emitted symbol; unconstrained mode scores the
    full vocabulary and never advances the automaton.  Generation stops at
    EOS or at the symbol budget (EOS is then appended so downstream repair
    sees a well-shaped sequence).
    """
    config = config or DecodeConfig()
    if automaton.consumed:
        raise DecodeError("decode requires a fresh automaton")
    if config.strategy == "beam" and config.constrained:
        return _beam_decode(sent, automaton, scorer, config)
    vocab = automaton.vocabulary()
    vocab_index = {s: i for i, s in enumerate(vocab)}
    rng = random.Random(config.seed)
    out: list[str] = []
    budget = config.budget(sent.n)
    while len(out) < budget:
        if config.constrained:
            cands = automaton.candidates()
            if not cands:
                raise EmptyCandidates(f"no candidates after {len(out)} symbols")
        else:
            cands = set(vocab)
        ordered = _ordered_candidates(cands, vocab_index)
        scores = scorer.score(list(sent.tokens), out, ordered)
        _check_scores(scores, len(ordered))
        if config.strategy == "sample":
            sym = _softmax_pick(rng, ordered, scores)
        else:
            best = max(range(len(ordered)), key=lambda i: (scores[i], -i))
            sym = ordered[best]
        if config.constrained:
            automaton.advance(sym)
        out.append(sym)
        if sym == EOS:
            return OutputSequence.of(out)
    out.append(EOS)
    return OutputSequence.of(out)


@dataclass
class _Branch:
    automaton: SchemaAutomaton
    symbols: list[str] = field(default_factory=list)
    score: float = 0.0
    order: tuple = ()

    def done(self) -> bool:
        return bool(self.symbols) and self.symbols[-1] == EOS


def _beam_decode(sent, automaton, scorer, config: DecodeConfig) -> OutputSequence:
    vocab = automaton.vocabulary()
    vocab_index = {s: i for i, s in enumerate(vocab)}
    beams = [_Branch(automaton)]
    budget = config.budget(sent.n)
    for _ in range(budget):
        if all(b.done() for b in beams):
            break
        expansions: list[tuple[float, tuple, _Branch, str | None]] = []
        for b in beams:
            if b.done():
                expansions.append((b.score, b.order, b, None))
                continue
            cands = b.automaton.candidates()
            if not cands:
                raise EmptyCandidates(f"no candidates after {len(b.symbols)} symbols")
            ordered = _ordered_candidates(cands, vocab_index)
            scores = scorer.score(list(sent.tokens), b.symbols, ordered)
            _check_scores(scores, len(ordered))
            for sym, sc in zip(ordered, scores):
                order = b.order + (vocab_index.get(sym, len(vocab_index)),)
                expansions.append((b.score + sc, order, b, sym))
        expansions.sort(key=lambda e: (-e[0], e[1]))
        next_beams = []
        for total, order, parent, sym in expansions[: config.beam_width]:
            if sym is None:
                next_beams.append(parent)
                continue
            auto = copy.deepcopy(parent.automaton)
            auto.advance(sym)
            next_beams.append(_Branch(auto, parent.symbols + [sym], total, order))
        beams = next_beams
    finished = [b for b in beams if b.done()]
    best = max(finished or beams, key=lambda b: b.score)
    symbols = best.symbols if best.done() else best.symbols + [EOS]
    return OutputSequence.of(symbols)
