"""Part-of-speech schema codecs and constrained automata.

Three output shapes for a tagged sentence:

* LS - the bare tag sequence.
* LT - source tokens interleaved with their tags, token first.
* PT - one quoted-token "is a <description>" phrase per token, joined by
  semicolons, closed by a period.
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
    MalformedOutputError,
    OutputSequence,
    PosSequence,
    Sentence,
)
from .trie import TokenTrie

MODES = ("ls", "lt", "pt")


def _check_mode(mode: str) -> str:
    mode = mode.lower()
    if mode not in MODES:
        raise ValueError(f"unknown schema mode {mode!r}")
    return mode


def suffix_trie(d: DescriptionDict) -> TokenTrie:
    """Trie of per-tag phrase suffixes: closing quote, "is", article, gloss, ";"."""
    trie = TokenTrie()
    for label in d.labels:
        trie.insert((CLOSE_QUOTE, "is") + d.phrase(label) + (SEMICOLON,), label)
    return trie


def linearize_pos(sent: Sentence, tags: PosSequence, mode: str, d: DescriptionDict) -> OutputSequence:
    mode = _check_mode(mode)
    if len(tags.tags) != sent.n:
        raise ValueError(f"{len(tags.tags)} tags for {sent.n} tokens")
    out: list[str] = []
    if mode == "ls":
        out.extend(tags.tags)
    elif mode == "lt":
        for tok, tag in zip(sent.tokens, tags.tags):
            out.extend((tok, tag))
    else:
        for i, (tok, tag) in enumerate(zip(sent.tokens, tags.tags), 1):
            out.extend((OPEN_QUOTE, tok, CLOSE_QUOTE, "is"))
            out.extend(d.phrase(tag))
            out.append(SEMICOLON if i < sent.n else PERIOD)
    out.append(EOS)
    return OutputSequence.of(out)


def delinearize_pos(
    sent: Sentence,
    out: OutputSequence,
    mode: str,
    d: DescriptionDict,
    lenient: bool = False,
) -> PosSequence:
    mode = _check_mode(mode)
    if lenient:
        return _lenient_pos(sent, out, mode, d)
    body = _strict_body(out)
    if mode == "ls":
        if len(body) != sent.n:
            raise MalformedOutputError(len(body), f"expected {sent.n} tags, got {len(body)}")
        for i, tag in enumerate(body):
            if tag not in d.entries:
                raise MalformedOutputError(i, f"unknown tag {tag!r}")
        return PosSequence.of(body)
    if mode == "lt":
        if len(body) != 2 * sent.n:
            raise MalformedOutputError(len(body), f"expected {2 * sent.n} symbols, got {len(body)}")
        tags = []
        for i in range(sent.n):
            tok, tag = body[2 * i], body[2 * i + 1]
            if tok != sent.token(i + 1):
                raise MalformedOutputError(2 * i, f"expected token {sent.token(i + 1)!r}, got {tok!r}")
            if tag not in d.entries:
                raise MalformedOutputError(2 * i + 1, f"unknown tag {tag!r}")
            tags.append(tag)
        return PosSequence.of(tags)
    return _strict_pos_pt(sent, body, d)


def _strict_body(out: OutputSequence) -> tuple[str, ...]:
    problems = out.validate()
    if problems:
        raise MalformedOutputError(len(out.symbols), problems[0])
    return out.body


def _split_phrases(body: tuple[str, ...]) -> list[list[str]]:
    """Split PT symbols on ';' separators; the final period stays attached."""
    phrases: list[list[str]] = [[]]
    for sym in body:
        if sym == SEMICOLON:
            phrases.append([])
        else:
            phrases[-1].append(sym)
    return phrases


def _parse_pos_phrase(phrase: list[str], d: DescriptionDict, at: int, final: bool):
    """Parse one ``\\`\\` token '' is <article> <gloss> [.]`` phrase."""
    if final:
        if not phrase or phrase[-1] != PERIOD:
            raise MalformedOutputError(at, "final phrase must end with '.'")
        phrase = phrase[:-1]
    if len(phrase) < 5 or phrase[0] != OPEN_QUOTE or phrase[2] != CLOSE_QUOTE or phrase[3] != "is":
        raise MalformedOutputError(at, f"malformed phrase {' '.join(phrase)!r}")
    token = phrase[1]
    article, gloss = phrase[4], tuple(phrase[5:])
    label = d.label_of_surface(gloss)
    if label is None or d.describe(label).article != article:
        raise MalformedOutputError(at, f"no tag described as {' '.join(phrase[4:])!r}")
    return token, label


def _strict_pos_pt(sent: Sentence, body: tuple[str, ...], d: DescriptionDict) -> PosSequence:
    phrases = _split_phrases(body)
    if len(phrases) != sent.n:
        raise MalformedOutputError(len(body), f"expected {sent.n} phrases, got {len(phrases)}")
    tags = []
    pos = 0
    for k, phrase in enumerate(phrases, 1):
        token, label = _parse_pos_phrase(phrase, d, pos, final=k == sent.n)
        if token != sent.token(k):
            raise MalformedOutputError(pos + 1, f"expected token {sent.token(k)!r}, got {token!r}")
        tags.append(label)
        pos += len(phrase) + 1
    return PosSequence.of(tags)


def _lenient_pos(sent: Sentence, out: OutputSequence, mode: str, d: DescriptionDict) -> PosSequence:
    default = d.default_label or next(iter(d.labels))
    body = [s for s in out.symbols if s != EOS]
    if mode == "ls":
        tags = [t for t in body if t in d.entries][: sent.n]
        tags += [default] * (sent.n - len(tags))
        return PosSequence.of(tags)
    # LT and PT: align phrases to positions by their generated tokens and
    # default whatever stays unmatched.
    pairs: list[tuple[str, str]] = []
    if mode == "lt":
        for i in range(len(body) - 1):
            if body[i + 1] in d.entries and body[i] not in d.entries:
                pairs.append((body[i], body[i + 1]))
    else:
        for phrase in _split_phrases(tuple(body)):
            if phrase and phrase[-1] == PERIOD:
                phrase = phrase[:-1]
            try:
                pairs.append(_parse_pos_phrase(phrase, d, 0, final=False))
            except MalformedOutputError:
                continue
    tags = [default] * sent.n
    cursor = 0
    for token, tag in pairs:
        for j in range(cursor, sent.n):
            if sent.token(j + 1) == token:
                tags[j] = tag
                cursor = j + 1
                break
    return PosSequence.of(tags)


# ---------------------------------------------------------------------------
# Automata


class PosLsAutomaton(SchemaAutomaton):
    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.d = d
        self.i = 0

    def _candidates(self) -> set[str]:
        if self.i < self.sent.n:
            return set(self.d.labels)
        return {EOS}

    def _apply(self, symbol: str) -> None:
        self.i += 1

    def vocabulary(self) -> tuple[str, ...]:
        return frozen_vocab(self.d.labels, (EOS,))


class PosLtAutomaton(SchemaAutomaton):
    """Alternates forced source tokens with free tag choices."""

    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.d = d
        self.i = 0

    def _candidates(self) -> set[str]:
        if self.i >= 2 * self.sent.n:
            return {EOS}
        if self.i % 2 == 0:
            return {self.sent.token(self.i // 2 + 1)}
        return set(self.d.labels)

    def _apply(self, symbol: str) -> None:
        self.i += 1

    def vocabulary(self) -> tuple[str, ...]:
        return frozen_vocab(self.sent.tokens, self.d.labels, (EOS,))


class PosPtAutomaton(SchemaAutomaton):
    """Token phase emits `` x_k ''; the suffix phase walks the gloss trie.

    When the walked node's children are exhausted the phrase is complete and
    the automaton flips back to the token phase, or to EOS once every source
    token has been described.  The separator after the final gloss is a
    period instead of a semicolon.
    """

    def __init__(self, sent: Sentence, d: DescriptionDict):
        super().__init__()
        self.sent = sent
        self.d = d
        self.trie = suffix_trie(d)
        self.expect_token = False  # True right after an opening quote
        self.k = 0  # source tokens consumed
        self.node = None  # current suffix-trie node, None outside suffix phase

    def _candidates(self) -> set[str]:
        if self.k == self.sent.n and self.node is None:
            return {EOS}
        if self.expect_token:
            return {self.sent.token(self.k + 1)}
        if self.node is None:
            return {OPEN_QUOTE}
        cands = set(self.node.children)
        if SEMICOLON in cands and self.k == self.sent.n:
            cands.discard(SEMICOLON)
            cands.add(PERIOD)
        return cands

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        if self.expect_token:
            self.expect_token = False
            self.k += 1
            self.node = self.trie.root
            return
        if self.node is None:
            self.expect_token = True
            return
        edge = SEMICOLON if symbol == PERIOD else symbol
        self.node = self.node.children[edge]
        if self.node.is_leaf():
            self.node = None

    def vocabulary(self) -> tuple[str, ...]:
        gloss_tokens = []
        for label in self.d.labels:
            gloss_tokens.extend(self.d.phrase(label))
        return frozen_vocab(
            (OPEN_QUOTE, CLOSE_QUOTE, "is", SEMICOLON, PERIOD),
            gloss_tokens,
            self.sent.tokens,
            (EOS,),
        )


def pos_automaton(sent: Sentence, mode: str, d: DescriptionDict) -> SchemaAutomaton:
    mode = _check_mode(mode)
    cls = {"ls": PosLsAutomaton, "lt": PosLtAutomaton, "pt": PosPtAutomaton}[mode]
    return cls(sent, d)


def next_y_pos(state: SchemaAutomaton, sent: Sentence, y_prefix) -> set[str]:
    """Candidate continuations of ``y_prefix`` under ``state``'s schema."""
    return state.next_candidates(list(y_prefix))
