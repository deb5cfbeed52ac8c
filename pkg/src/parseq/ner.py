"""Named-entity schema codecs and constrained automata.

* LS - one BIEOS tag per token.
* LT - source tokens with ``<TYPE> ... </TYPE>`` wrapped around each entity.
* PT - one quoted-span "is a <description>" phrase per entity, in span order;
  sentences without entities produce the sentinel phrase ``no entities .``.

Spans generated by PT are anchored by string matching: a decoded span is
resolved to its first token-level occurrence after the previous entity, so
surfaces that repeat earlier in the sentence can be mis-anchored.  That noise
is inherent to the schema and accepted.
"""
from __future__ import annotations

from .automaton import SchemaAutomaton, frozen_vocab
from .core import (
    CLOSE_QUOTE,
    EOS,
    OPEN_QUOTE,
    PERIOD,
    SEMICOLON,
    DescriptionDict,
    Entity,
    EntitySet,
    MalformedOutputError,
    OutputSequence,
    Sentence,
)
from .trie import TokenTrie, TrieNode

NO_ENTITIES = ("no", "entities", PERIOD)
OUTSIDE = "O"
VERBOSE_NON_ENTITY = ("isn't", "an", "entity")


def opening_tag(label: str) -> str:
    return f"<{label}>"


def closing_tag(label: str) -> str:
    return f"</{label}>"


def suffix_trie(d: DescriptionDict, verbose: bool = False) -> TokenTrie:
    """Trie of "is a <gloss>" suffixes, one per entity type, ';'-terminated."""
    trie = TokenTrie()
    for label in d.labels:
        trie.insert((CLOSE_QUOTE, "is") + d.phrase(label) + (SEMICOLON,), label)
    if verbose:
        trie.insert((CLOSE_QUOTE,) + VERBOSE_NON_ENTITY + (SEMICOLON,), OUTSIDE)
    return trie


def segment(trie: TokenTrie, phrase: list[str]) -> tuple[list[str], list[str], TrieNode] | None:
    """Split a partial phrase into (entity, suffix, matched node).

    Returns the smallest split point whose remainder walks the trie; the
    all-entity split matches the root.  None only for an empty phrase.
    """
    for i in range(1, len(phrase) + 1):
        node = trie.prefix_match(phrase[i:])
        if node is not None:
            return phrase[:i], phrase[i:], node
    return None


# ---------------------------------------------------------------------------
# BIEOS tagging


def bieos_tags(sent: Sentence, entities: EntitySet) -> list[str]:
    tags = [OUTSIDE] * sent.n
    for ent in entities.entities:
        if ent.start == ent.end:
            tags[ent.start - 1] = f"S-{ent.label}"
        else:
            tags[ent.start - 1] = f"B-{ent.label}"
            for k in range(ent.start + 1, ent.end):
                tags[k - 1] = f"I-{ent.label}"
            tags[ent.end - 1] = f"E-{ent.label}"
    return tags


def spans_from_bieos(tags: list[str], strict: bool = True) -> list[Entity]:
    """Decode BIEOS tags to spans.  Non-strict mode applies standard repair:
    a dangling inside/end tag opens a new span, unterminated spans close."""
    spans: list[Entity] = []
    start = None
    label = None
    for i, tag in enumerate(tags, 1):
        prefix, _, kind = tag.partition("-")
        if prefix == OUTSIDE and not kind:
            if start is not None:
                if strict:
                    raise MalformedOutputError(i - 1, f"span open at {tag!r}")
                spans.append(Entity(start, i - 1, label))
                start = None
            continue
        if prefix not in ("B", "I", "E", "S") or not kind:
            raise MalformedOutputError(i - 1, f"unknown tag {tag!r}")
        if prefix == "S":
            if start is not None:
                if strict:
                    raise MalformedOutputError(i - 1, f"span open at {tag!r}")
                spans.append(Entity(start, i - 1, label))
                start = None
            spans.append(Entity(i, i, kind))
        elif prefix == "B":
            if start is not None:
                if strict:
                    raise MalformedOutputError(i - 1, f"span open at {tag!r}")
                spans.append(Entity(start, i - 1, label))
            start, label = i, kind
        elif prefix == "I":
            if start is None or kind != label:
                if strict:
                    raise MalformedOutputError(i - 1, f"dangling {tag!r}")
                if start is not None:
                    spans.append(Entity(start, i - 1, label))
                start, label = i, kind
        else:  # E
            if start is None or kind != label:
                if strict:
                    raise MalformedOutputError(i - 1, f"dangling {tag!r}")
                if start is not None:
                    spans.append(Entity(start, i - 1, label))
                start, label = i, kind
            spans.append(Entity(start, i, label))
            start = None
    if start is not None:
        if strict:
            raise MalformedOutputError(len(tags), "unterminated span")
        spans.append(Entity(start, len(tags), label))
    return spans


def occurrences(sent: Sentence, prefix: list[str], min_start: int) -> list[int]:
    """1-based starts >= min_start where the sentence matches ``prefix``."""
    out = []
    m = len(prefix)
    for p in range(min_start, sent.n - m + 2):
        if list(sent.tokens[p - 1 : p - 1 + m]) == prefix:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Codecs


def linearize_ner(
    sent: Sentence, entities: EntitySet, mode: str, d: DescriptionDict, verbose: bool = False
) -> OutputSequence:
    mode = mode.lower()
    out: list[str] = []
    if mode == "ls":
        out.extend(bieos_tags(sent, entities))
    elif mode == "lt":
        spans = {e.start: e for e in entities.entities}
        ends = {e.end: e for e in entities.entities}
        for i in range(1, sent.n + 1):
            if i in spans:
                out.append(opening_tag(spans[i].label))
            out.append(sent.token(i))
            if i in ends:
                out.append(closing_tag(ends[i].label))
    elif mode == "pt":
        out.extend(_linearize_ner_pt(sent, entities, d, verbose))
    else:
        raise ValueError(f"unknown schema mode {mode!r}")
    out.append(EOS)
    return OutputSequence.of(out)


def _phrase_for(tokens: tuple[str, ...], tail: tuple[str, ...]) -> list[str]:
    return [OPEN_QUOTE, *tokens, CLOSE_QUOTE, *tail]


def _linearize_ner_pt(sent: Sentence, entities: EntitySet, d: DescriptionDict, verbose: bool) -> list[str]:
    phrases: list[list[str]] = []
    if verbose:
        i = 1
        spans = {e.start: e for e in entities.entities}
        while i <= sent.n:
            if i in spans:
                ent = spans[i]
                toks = sent.tokens[ent.start - 1 : ent.end]
                phrases.append(_phrase_for(toks, ("is",) + d.phrase(ent.label)))
                i = ent.end + 1
            else:
                phrases.append(_phrase_for((sent.token(i),), VERBOSE_NON_ENTITY))
                i += 1
    else:
        for ent in entities.entities:
            toks = sent.tokens[ent.start - 1 : ent.end]
            phrases.append(_phrase_for(toks, ("is",) + d.phrase(ent.label)))
    if not phrases:
        return list(NO_ENTITIES)
    out: list[str] = []
    for k, phrase in enumerate(phrases, 1):
        out.extend(phrase)
        out.append(SEMICOLON if k < len(phrases) else PERIOD)
    return out


def delinearize_ner(
    sent: Sentence,
    out: OutputSequence,
    mode: str,
    d: DescriptionDict,
    lenient: bool = False,
    verbose: bool = False,
) -> EntitySet:
    mode = mode.lower()
    if mode == "ls":
        return _delinearize_ner_ls(sent, out, lenient)
    if mode == "lt":
        return _delinearize_ner_lt(sent, out, d, lenient)
    if mode == "pt":
        return _delinearize_ner_pt(sent, out, d, lenient, verbose)
    raise ValueError(f"unknown schema mode {mode!r}")


def _delinearize_ner_ls(sent: Sentence, out: OutputSequence, lenient: bool) -> EntitySet:
    if lenient:
        tags = [s for s in out.symbols if s != EOS][: sent.n]
        tags += [OUTSIDE] * (sent.n - len(tags))
        spans = []
        try:
            spans = spans_from_bieos(tags, strict=False)
        except MalformedOutputError:
            pass
        return EntitySet.of((s.start, s.end, s.label) for s in spans if s.end <= sent.n)
    problems = out.validate()
    if problems:
        raise MalformedOutputError(len(out.symbols), problems[0])
    body = list(out.body)
    if len(body) != sent.n:
        raise MalformedOutputError(len(body), f"expected {sent.n} tags, got {len(body)}")
    return EntitySet.of(spans_from_bieos(body, strict=True))


def _delinearize_ner_lt(sent: Sentence, out: OutputSequence, d: DescriptionDict, lenient: bool) -> EntitySet:
    openers = {opening_tag(t): t for t in d.labels}
    closers = {closing_tag(t): t for t in d.labels}
    if not lenient:
        problems = out.validate()
        if problems:
            raise MalformedOutputError(len(out.symbols), problems[0])
    spans: list[Entity] = []
    open_label = None
    open_start = None
    k = 0  # source tokens consumed
    for pos, sym in enumerate(out.body):
        if sym in openers:
            if open_label is not None:
                if not lenient:
                    raise MalformedOutputError(pos, f"tag {sym!r} opened inside an entity")
                open_label = None  # drop the unclosed entity
            open_label = openers[sym]
            open_start = k + 1
        elif sym in closers:
            if open_label != closers[sym] or k < open_start:
                if not lenient:
                    raise MalformedOutputError(pos, f"unmatched closing tag {sym!r}")
                open_label = None
                continue
            spans.append(Entity(open_start, k, open_label))
            open_label = None
        else:
            if k >= sent.n:
                if not lenient:
                    raise MalformedOutputError(pos, f"extra token {sym!r} past sentence end")
                continue
            if not lenient and sym != sent.token(k + 1):
                raise MalformedOutputError(pos, f"expected token {sent.token(k + 1)!r}, got {sym!r}")
            k += 1
    if not lenient:
        if open_label is not None:
            raise MalformedOutputError(len(out.body), "entity never closed")
        if k != sent.n:
            raise MalformedOutputError(len(out.body), f"consumed {k} of {sent.n} source tokens")
    return EntitySet.of((s.start, s.end, s.label) for s in spans if s.end <= sent.n)


def _parse_ner_phrase(phrase: list[str], d: DescriptionDict, at: int, final: bool, verbose: bool):
    """Parse one quoted-span phrase; returns (span tokens, label or OUTSIDE)."""
    if final:
        if not phrase or phrase[-1] != PERIOD:
            raise MalformedOutputError(at, "final phrase must end with '.'")
        phrase = phrase[:-1]
    if len(phrase) < 3 or phrase[0] != OPEN_QUOTE or CLOSE_QUOTE not in phrase:
        raise MalformedOutputError(at, f"malformed phrase {' '.join(phrase)!r}")
    close = phrase.index(CLOSE_QUOTE)
    toks = phrase[1:close]
    tail = phrase[close + 1 :]
    if not toks:
        raise MalformedOutputError(at, "empty quoted span")
    if verbose and tuple(tail) == VERBOSE_NON_ENTITY:
        return toks, OUTSIDE
    if len(tail) < 3 or tail[0] != "is":
        raise MalformedOutputError(at, f"malformed suffix {' '.join(tail)!r}")
    article, gloss = tail[1], tuple(tail[2:])
    label = d.label_of_surface(gloss)
    if label is None or d.describe(label).article != article:
        raise MalformedOutputError(at, f"no entity type described as {' '.join(tail[1:])!r}")
    return toks, label


def _delinearize_ner_pt(
    sent: Sentence, out: OutputSequence, d: DescriptionDict, lenient: bool, verbose: bool
) -> EntitySet:
    if not lenient:
        problems = out.validate()
        if problems:
            raise MalformedOutputError(len(out.symbols), problems[0])
    body = tuple(s for s in out.symbols if s != EOS)
    if not verbose and body == NO_ENTITIES:
        return EntitySet.of(())
    phrases: list[list[str]] = [[]]
    for sym in body:
        if sym == SEMICOLON:
            phrases.append([])
        else:
            phrases[-1].append(sym)
    spans: list[Entity] = []
    min_start = 1
    pos = 0
    for k, phrase in enumerate(phrases, 1):
        final = k == len(phrases)
        try:
            toks, label = _parse_ner_phrase(list(phrase), d, pos, final, verbose)
        except MalformedOutputError:
            if lenient:
                continue
            raise
        pos += len(phrase) + 1
        if label == OUTSIDE:
            if not lenient and len(toks) != 1:
                raise MalformedOutputError(pos, "non-entity phrases cover single tokens")
            if not lenient and toks[0] != sent.token(min_start):
                raise MalformedOutputError(pos, f"expected token {sent.token(min_start)!r}")
            min_start += len(toks)
            continue
        occ = occurrences(sent, toks, min_start)
        if not occ:
            if lenient:
                occ = occurrences(sent, toks, 1)  # discard if truly unmatchable
                if not occ:
                    continue
            else:
                raise MalformedOutputError(pos, f"span {toks!r} has no occurrence after {min_start}")
        if verbose and (not occ or occ[0] != min_start) and not lenient:
            raise MalformedOutputError(pos, f"span {toks!r} not at position {min_start}")
        start = occ[0]
        spans.append(Entity(start, start + len(toks) - 1, label))
        min_start = start + len(toks)
    if verbose and not lenient and min_start != sent.n + 1:
        raise MalformedOutputError(pos, f"described {min_start - 1} of {sent.n} positions")
    spans = [s for s in spans if s.end <= sent.n]
    return EntitySet.of(spans)


# ---------------------------------------------------------------------------
# Automata


class NerLsAutomaton(SchemaAutomaton):
    """BIEOS tag grammar: spans must open, continue, and close consistently."""

    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.labels = d.labels
        self.i = 0
        self.open_label: str | None = None

    def _candidates(self) -> set[str]:
        remaining = self.sent.n - self.i
        if remaining == 0:
            return {EOS}
        if self.open_label is None:
            cands = {OUTSIDE} | {f"S-{t}" for t in self.labels}
            if remaining >= 2:
                cands |= {f"B-{t}" for t in self.labels}
            return cands
        cands = {f"E-{self.open_label}"}
        if remaining >= 2:
            cands.add(f"I-{self.open_label}")
        return cands

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        self.i += 1
        prefix = symbol.partition("-")[0]
        if prefix == "B":
            self.open_label = symbol[2:]
        elif prefix == "E":
            self.open_label = None

    def vocabulary(self) -> tuple[str, ...]:
        tags = [OUTSIDE]
        for t in self.labels:
            tags.extend((f"B-{t}", f"I-{t}", f"E-{t}", f"S-{t}"))
        return frozen_vocab(tags, (EOS,))


class NerLtAutomaton(SchemaAutomaton):
    """Forces source-token order and pairing of opening/closing type tags."""

    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.labels = d.labels
        self.k = 0  # source tokens consumed
        self.expected_close: str | None = None
        self.span_len = 0

    def _candidates(self) -> set[str]:
        n = self.sent.n
        cands: set[str] = set()
        if self.expected_close is not None:
            if self.span_len >= 1:
                cands.add(self.expected_close)
            if self.k < n:
                cands.add(self.sent.token(self.k + 1))
        else:
            if self.k < n:
                cands.add(self.sent.token(self.k + 1))
                cands.update(opening_tag(t) for t in self.labels)
            else:
                cands.add(EOS)
        return cands

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        # A source token that collides with a tag string is consumed as a token.
        if self.k < self.sent.n and symbol == self.sent.token(self.k + 1):
            self.k += 1
            if self.expected_close is not None:
                self.span_len += 1
            return
        if symbol == self.expected_close:
            self.expected_close = None
            return
        self.expected_close = closing_tag(symbol[1:-1])
        self.span_len = 0

    def vocabulary(self) -> tuple[str, ...]:
        tags = []
        for t in self.labels:
            tags.extend((opening_tag(t), closing_tag(t)))
        return frozen_vocab(self.sent.tokens, tags, (EOS,))


class NerPtAutomaton(SchemaAutomaton):
    """Entity spans are built token-by-token from real occurrences.

    While a span is open, candidates are the tokens that extend one of its
    occurrences plus the closing quote; glosses walk the suffix trie.  The
    span resolved at the closing quote is the first occurrence after the
    previous entity, keeping generation left-to-right.
    """

    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.d = d
        self.trie = suffix_trie(d)
        self.min_start = 1
        self.phase = "start"  # start | sentinel1 | sentinel2 | open | entity | suffix | stop | eos
        self.entity: list[str] = []
        self.node = None
        self.pending_end = 0

    def _candidates(self) -> set[str]:
        n = self.sent.n
        if self.phase == "start":
            return {OPEN_QUOTE, NO_ENTITIES[0]}
        if self.phase == "sentinel1":
            return {NO_ENTITIES[1]}
        if self.phase == "sentinel2":
            return {PERIOD}
        if self.phase == "open":
            return {OPEN_QUOTE}
        if self.phase == "entity":
            if not self.entity:
                return {self.sent.token(p) for p in range(self.min_start, n + 1)}
            m = len(self.entity)
            cands = {CLOSE_QUOTE}
            for p in occurrences(self.sent, self.entity, self.min_start):
                if p + m <= n:
                    cands.add(self.sent.token(p + m))
            return cands
        if self.phase == "suffix":
            cands = set(self.node.children)
            if SEMICOLON in self.node.children:
                if self.pending_end >= n:
                    cands.discard(SEMICOLON)
                cands.add(PERIOD)
            return cands
        if self.phase == "stop":
            return {EOS}
        return set()

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        if self.phase == "start":
            if symbol == NO_ENTITIES[0]:
                self.phase = "sentinel1"
            else:
                self.phase = "entity"
                self.entity = []
            return
        if self.phase == "sentinel1":
            self.phase = "sentinel2"
            return
        if self.phase == "sentinel2":
            self.phase = "stop"
            return
        if self.phase == "open":
            self.phase = "entity"
            self.entity = []
            return
        if self.phase == "entity":
            if symbol == CLOSE_QUOTE:
                start = occurrences(self.sent, self.entity, self.min_start)[0]
                self.pending_end = start + len(self.entity) - 1
                self.node = self.trie.root.children[CLOSE_QUOTE]
                self.phase = "suffix"
            else:
                self.entity.append(symbol)
            return
        if self.phase == "suffix":
            if symbol == PERIOD:
                self.phase = "stop"
                return
            self.node = self.node.children[symbol]
            if symbol == SEMICOLON:
                self.min_start = self.pending_end + 1
                self.phase = "open"
            return

    def vocabulary(self) -> tuple[str, ...]:
        gloss = []
        for label in self.d.labels:
            gloss.extend(self.d.phrase(label))
        return frozen_vocab(
            (OPEN_QUOTE, CLOSE_QUOTE, "is", SEMICOLON, PERIOD),
            NO_ENTITIES,
            gloss,
            self.sent.tokens,
            (EOS,),
        )


class NerPtVerboseAutomaton(SchemaAutomaton):
    """Position-driven variant: every token is described, entities by type and
    other tokens by the fixed non-entity suffix."""

    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.d = d
        self.trie = suffix_trie(d, verbose=True)
        self.k = 1  # next position to describe
        self.phase = "open"
        self.span = 0
        self.node = None

    def _candidates(self) -> set[str]:
        n = self.sent.n
        if self.phase == "open":
            return {OPEN_QUOTE}
        if self.phase == "entity":
            nxt = self.k + self.span
            cands = set()
            if self.span >= 1:
                cands.add(CLOSE_QUOTE)
            if nxt <= n:
                cands.add(self.sent.token(nxt))
            return cands
        if self.phase == "suffix":
            cands = set(self.node.children)
            if self.span > 1:
                # multi-token spans must be entities
                cands.discard(VERBOSE_NON_ENTITY[0])
            if SEMICOLON in self.node.children:
                # every position must be described before stopping
                cands.discard(SEMICOLON)
                cands.add(SEMICOLON if self.k <= n else PERIOD)
            return cands
        if self.phase == "stop":
            return {EOS}
        return set()

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        if self.phase == "open":
            self.phase = "entity"
            self.span = 0
            return
        if self.phase == "entity":
            if symbol == CLOSE_QUOTE:
                self.node = self.trie.root.children[CLOSE_QUOTE]
                self.k += self.span
                self.phase = "suffix"
            else:
                self.span += 1
            return
        if self.phase == "suffix":
            if symbol == PERIOD:
                self.phase = "stop"
                return
            self.node = self.node.children[symbol]
            if symbol == SEMICOLON:
                self.phase = "open"
            return

    def vocabulary(self) -> tuple[str, ...]:
        gloss = list(VERBOSE_NON_ENTITY)
        for label in self.d.labels:
            gloss.extend(self.d.phrase(label))
        return frozen_vocab(
            (OPEN_QUOTE, CLOSE_QUOTE, "is", SEMICOLON, PERIOD),
            gloss,
            self.sent.tokens,
            (EOS,),
        )


def ner_automaton(sent: Sentence, mode: str, d: DescriptionDict, verbose: bool = False) -> SchemaAutomaton:
    mode = mode.lower()
    if mode == "ls":
        return NerLsAutomaton(sent, d)
    if mode == "lt":
        return NerLtAutomaton(sent, d)
    if mode == "pt":
        return NerPtVerboseAutomaton(sent, d) if verbose else NerPtAutomaton(sent, d)
    raise ValueError(f"unknown schema mode {mode!r}")


def next_y_ner(state: SchemaAutomaton, sent: Sentence, y_prefix) -> set[str]:
    return state.next_candidates(list(y_prefix))
