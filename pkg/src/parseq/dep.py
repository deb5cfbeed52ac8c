"""Dependency schema codecs: arc-standard transitions, the static oracle,
and the prompt automaton that keeps a transition system synchronized with
generation.

Transition semantics (stack top is position 1): a left arc makes the top the
head of the element below it and pops that element; a right arc makes the
element below the head of the top and pops the top.  The artificial root is
id 0 at the stack bottom and surfaces in prompts as the word "sentence"; the
canonical linearization ends by attaching the root word to it.
"""
from __future__ import annotations

from .automaton import SchemaAutomaton, frozen_vocab
from .core import (
    CLOSE_QUOTE,
    EOS,
    OPEN_QUOTE,
    PERIOD,
    SEMICOLON,
    DepTree,
    DescriptionDict,
    MalformedOutputError,
    OutputSequence,
    Sentence,
    is_projective,
)
from .profiles import SENTENCE_WORD
from .trie import TokenTrie

ROOT_REL = "root"
SH = ("SH",)


class TransitionError(ValueError):
    pass


def arc_symbol(transition: tuple, notation: str = "angle") -> str:
    kind, rel = transition
    if notation == "angle":
        return ("<" if kind == "LA" else ">") + rel
    return f"{kind}-{rel}"


def parse_arc_symbol(sym: str, notation: str = "angle") -> tuple | None:
    if notation == "angle":
        if sym.startswith("<"):
            return ("LA", sym[1:])
        if sym.startswith(">"):
            return ("RA", sym[1:])
        return None
    if sym.startswith("LA-"):
        return ("LA", sym[3:])
    if sym.startswith("RA-"):
        return ("RA", sym[3:])
    return None


class ArcState:
    """Arc-standard configuration over ids 0..n (0 = artificial root)."""

    def __init__(self, n: int):
        self.n = n
        self.stack: list[int] = [0]
        self.next = 1
        self.arcs: dict[int, tuple[int, str]] = {}

    @property
    def buffer(self) -> range:
        return range(self.next, self.n + 1)

    def terminal(self) -> bool:
        return len(self.stack) == 1 and self.next > self.n

    def pending_root(self) -> bool:
        """One unattached word left on the stack, everything else consumed."""
        return len(self.stack) == 2 and self.next > self.n

    def can_shift(self) -> bool:
        return self.next <= self.n

    def can_left(self) -> bool:
        return len(self.stack) >= 3

    def can_right(self) -> bool:
        return len(self.stack) >= 3 or self.pending_root()

    def apply(self, transition: tuple) -> "ArcState":
        kind = transition[0]
        if kind == "SH":
            if not self.can_shift():
                raise TransitionError("shift with an empty buffer")
            self.stack.append(self.next)
            self.next += 1
        elif kind == "LA":
            if not self.can_left():
                raise TransitionError("left arc needs two words on the stack")
            dep = self.stack.pop(-2)
            self.arcs[dep] = (self.stack[-1], transition[1])
        elif kind == "RA":
            if not self.can_right():
                raise TransitionError("right arc not available here")
            dep = self.stack.pop()
            self.arcs[dep] = (self.stack[-1], transition[1])
        else:
            raise TransitionError(f"unknown transition {transition!r}")
        return self

    def attach_root(self, rel: str = ROOT_REL) -> None:
        if not self.pending_root():
            raise TransitionError("root attachment needs exactly one finished word")
        self.apply(("RA", rel))

    def to_tree(self) -> DepTree:
        if not self.terminal():
            raise TransitionError("parse is not complete")
        heads, rels = [], []
        for i in range(1, self.n + 1):
            h, r = self.arcs[i]
            heads.append(h)
            rels.append(r)
        return DepTree.of(heads, rels)


def dep_oracle(tree: DepTree) -> list[tuple]:
    """Static oracle: attach each dependent as soon as all of its own
    dependents are collected, shifting otherwise.  Ends with the root arc."""
    n = tree.n
    if not is_projective(tree.heads):
        raise TransitionError("tree is not projective")
    total = [0] * (n + 1)
    for h in tree.heads:
        total[h] += 1 if h > 0 else 0
    total[0] = 0
    collected = [0] * (n + 1)
    heads = (None,) + tree.heads
    rels = (None,) + tree.rels
    state = ArcState(n)
    out: list[tuple] = []

    def emit(t: tuple):
        out.append(t)
        state.apply(t)

    while not state.terminal():
        if len(state.stack) >= 3:
            s2, s1 = state.stack[-2], state.stack[-1]
            if heads[s2] == s1 and collected[s2] == total[s2]:
                collected[s1] += 1
                emit(("LA", rels[s2]))
                continue
            if heads[s1] == s2 and collected[s1] == total[s1]:
                collected[s2] += 1
                emit(("RA", rels[s1]))
                continue
        if state.pending_root():
            s1 = state.stack[-1]
            if heads[s1] != 0:
                raise TransitionError("dangling word is not the root")
            emit(("RA", rels[s1]))
            continue
        if state.can_shift():
            emit(SH)
            continue
        raise TransitionError("oracle stuck; tree is malformed")
    return out


def replay(n: int, transitions) -> DepTree:
    state = ArcState(n)
    for t in transitions:
        state.apply(t)
    return state.to_tree()


def recall_shift(state: ArcState, i: int, xj: str, sent: Sentence) -> ArcState:
    """Shift until stack position ``i`` (1 = top) holds the token ``xj``."""
    if i not in (1, 2):
        raise ValueError("stack position must be 1 or 2")

    def name(idx: int) -> str:
        return SENTENCE_WORD if idx == 0 else sent.token(idx)

    while len(state.stack) < i or name(state.stack[-i]) != xj:
        if not state.can_shift():
            raise TransitionError(f"{xj!r} cannot reach stack position {i}")
        state.apply(SH)
    return state


# ---------------------------------------------------------------------------
# Codecs


def relation_trie(d: DescriptionDict) -> TokenTrie:
    """Phrase middles: "'' is <gloss> of ``" for left arcs, "'' has <gloss> ``"
    for right arcs, ending at the opening quote of the second operand."""
    trie = TokenTrie()
    for rel in d.labels:
        trie.insert((CLOSE_QUOTE, "is") + d.phrase(rel) + ("of", OPEN_QUOTE), ("LA", rel))
        trie.insert((CLOSE_QUOTE, "has") + d.phrase(rel) + (OPEN_QUOTE,), ("RA", rel))
    return trie


def linearize_dep(
    sent: Sentence,
    tree: DepTree,
    mode: str,
    d: DescriptionDict,
    include_root: bool = True,
    notation: str = "angle",
) -> OutputSequence:
    mode = mode.lower()
    transitions = dep_oracle(tree)
    if not include_root:
        transitions = transitions[:-1]
    out: list[str] = []
    if mode in ("ls", "lt"):
        cursor = 1
        for t in transitions:
            if t == SH:
                out.append("SH" if mode == "ls" else sent.token(cursor))
                cursor += 1
            else:
                out.append(arc_symbol(t, notation))
    elif mode == "pt":
        out.extend(_linearize_dep_pt(sent, tree, transitions, d))
    else:
        raise ValueError(f"unknown schema mode {mode!r}")
    out.append(EOS)
    return OutputSequence.of(out)


def _linearize_dep_pt(sent: Sentence, tree: DepTree, transitions, d: DescriptionDict) -> list[str]:
    def name(idx: int) -> str:
        return SENTENCE_WORD if idx == 0 else sent.token(idx)

    state = ArcState(tree.n)
    phrases: list[list[str]] = []
    for t in transitions:
        if t == SH:
            state.apply(t)
            continue
        kind, rel = t
        if kind == "LA":
            dep, head = state.stack[-2], state.stack[-1]
            middle = ["is", *d.phrase(rel), "of"]
            first, second = dep, head
        else:
            head, dep = state.stack[-2], state.stack[-1]
            middle = ["has", *d.phrase(rel)]
            first, second = head, dep
        phrases.append(
            [OPEN_QUOTE, name(first), CLOSE_QUOTE, *middle, OPEN_QUOTE, name(second), CLOSE_QUOTE]
        )
        state.apply(t)
    out: list[str] = []
    for k, phrase in enumerate(phrases, 1):
        out.extend(phrase)
        out.append(SEMICOLON if k < len(phrases) else PERIOD)
    return out


def delinearize_dep(
    sent: Sentence,
    out: OutputSequence,
    mode: str,
    d: DescriptionDict,
    lenient: bool = False,
    include_root: bool = True,
    notation: str = "angle",
) -> DepTree:
    mode = mode.lower()
    if mode == "pt":
        return _delinearize_dep_pt(sent, out, d, lenient, include_root)
    if mode not in ("ls", "lt"):
        raise ValueError(f"unknown schema mode {mode!r}")
    if not lenient:
        problems = out.validate()
        if problems:
            raise MalformedOutputError(len(out.symbols), problems[0])
    state = ArcState(sent.n)
    for pos, sym in enumerate(s for s in out.symbols if s != EOS):
        arc = parse_arc_symbol(sym, notation)
        if arc is not None and arc[1] in d.entries:
            t = arc
        elif mode == "lt" or sym == "SH":
            if mode == "lt" and not lenient:
                if state.next > sent.n or sym != sent.token(state.next):
                    raise MalformedOutputError(pos, f"unexpected token {sym!r}")
            t = SH
        else:
            if lenient:
                continue
            raise MalformedOutputError(pos, f"unknown transition symbol {sym!r}")
        try:
            state.apply(t)
        except TransitionError as exc:
            if lenient:
                continue
            raise MalformedOutputError(pos, str(exc)) from None
    return _finish(state, lenient, include_root, len(out.symbols))


def _finish(state: ArcState, lenient: bool, include_root: bool, at: int) -> DepTree:
    if not include_root:
        if state.stack == [0] and state.next == state.n and len(state.arcs) == state.n - 1:
            state.apply(SH)  # lone root word was never mentioned
        if state.pending_root():
            state.attach_root()
    if lenient:
        return _lenient_tree(state)
    try:
        return state.to_tree()
    except TransitionError as exc:
        raise MalformedOutputError(at, str(exc)) from None


def _lenient_tree(state: ArcState) -> DepTree:
    n = state.n
    heads = [None] * (n + 1)
    rels = [None] * (n + 1)
    for dep, (h, r) in state.arcs.items():
        heads[dep], rels[dep] = h, r
    root = next((i for i in range(1, n + 1) if heads[i] == 0), None)
    if root is None:
        root = next((i for i in state.stack if i != 0), 1)
        heads[root], rels[root] = 0, ROOT_REL
    default = "dep"
    for i in range(1, n + 1):
        if heads[i] is None:
            heads[i], rels[i] = (root, default) if i != root else (0, ROOT_REL)
    # a lenient repair may have produced crossing arcs; flatten them onto root
    if not is_projective(heads[1:]):
        order = sorted(range(1, n + 1), key=lambda i: abs(heads[i] - i))
        for i in reversed(order):
            if i != root:
                heads[i], rels[i] = root, default
                if is_projective(heads[1:]):
                    break
    return DepTree.of(heads[1:], rels[1:])


def _delinearize_dep_pt(
    sent: Sentence, out: OutputSequence, d: DescriptionDict, lenient: bool, include_root: bool
) -> DepTree:
    """Replay the sequence through the synchronized automaton; the transition
    system it maintains is the parse, so no separate reverse pass exists."""
    auto = DepPtAutomaton(sent, d, include_root=include_root)
    if lenient:
        return _lenient_dep_pt(sent, out, d)
    problems = out.validate()
    if problems:
        raise MalformedOutputError(len(out.symbols), problems[0])
    from .automaton import InconsistentPrefix

    for pos, sym in enumerate(out.symbols):
        try:
            auto.advance(sym)
        except InconsistentPrefix as exc:
            raise MalformedOutputError(pos, f"schema violation: {exc}") from None
    return _finish(auto.state, False, include_root, len(out.symbols))


def _lenient_dep_pt(sent: Sentence, out: OutputSequence, d: DescriptionDict) -> DepTree:
    trie = relation_trie(d)
    state = ArcState(sent.n)
    body = [s for s in out.symbols if s != EOS]
    phrases: list[list[str]] = [[]]
    for sym in body:
        if sym == SEMICOLON:
            phrases.append([])
        else:
            phrases[-1].append(sym)
    for phrase in phrases:
        if phrase and phrase[-1] == PERIOD:
            phrase = phrase[:-1]
        parsed = _parse_pt_phrase(phrase, trie)
        if parsed is None:
            continue
        t1, t2, transition = parsed
        route = _matching_route(state, sent, t1, t2, transition[0])
        if route is None:
            continue
        _apply_route(state, route, transition)
    return _lenient_tree(state)


def _parse_pt_phrase(phrase: list[str], trie: TokenTrie):
    if len(phrase) < 7 or phrase[0] != OPEN_QUOTE or phrase[-1] != CLOSE_QUOTE:
        return None
    t1 = phrase[1]
    middle = phrase[2:-2]
    t2 = phrase[-2]
    node = trie.prefix_match(middle)
    if node is None or not node.terminal:
        return None
    return t1, t2, node.value


def _routes(state: ArcState) -> list[tuple[int, int]]:
    """Operand pairs reachable by recalled shifts, nearest first.

    A pair is (first, second): second ends on top of the stack with first
    right below it.  The artificial root may appear as first only for the
    final attachment."""
    routes: list[tuple[int, int]] = []
    s, nxt, n = state.stack, state.next, state.n
    buffer_empty = nxt > n
    if len(s) >= 2 and (s[-2] != 0 or buffer_empty):
        routes.append((s[-2], s[-1]))
    if nxt <= n and (s[-1] != 0 or nxt == n):
        # shifting the buffer head puts it on top of the current top
        if s[-1] != 0:
            routes.append((s[-1], nxt))
        elif nxt == n:
            routes.append((0, nxt))
    for p in range(nxt, n):
        routes.append((p, p + 1))
    return routes


def _name(sent: Sentence, idx: int) -> str:
    return SENTENCE_WORD if idx == 0 else sent.token(idx)


def _matching_route(state: ArcState, sent: Sentence, t1: str, t2: str, kind: str):
    for first, second in _routes(state):
        if kind == "LA" and first == 0:
            continue
        if _name(sent, first) == t1 and _name(sent, second) == t2:
            return (first, second)
    return None


def _apply_route(state: ArcState, route: tuple[int, int], transition: tuple):
    first, second = route
    while state.stack[-1] != second:
        state.apply(SH)
    if state.stack[-2] != first:
        raise TransitionError("operands not adjacent after recall")
    state.apply(transition)


# ---------------------------------------------------------------------------
# Automata


class DepLsAutomaton(SchemaAutomaton):
    def __init__(self, sent: Sentence, d: DescriptionDict, include_root: bool = True, notation: str = "angle"):
        super().__init__()
        self.sent = sent
        self.d = d
        self.include_root = include_root
        self.notation = notation
        self.state = ArcState(sent.n)

    def _token_candidate(self) -> set[str]:
        return {"SH"}

    def _candidates(self) -> set[str]:
        st = self.state
        if st.terminal() or (not self.include_root and st.pending_root()):
            return {EOS}
        cands: set[str] = set()
        if st.can_shift():
            cands |= self._token_candidate()
        if st.can_left():
            cands |= {arc_symbol(("LA", r), self.notation) for r in self.d.labels}
        if st.can_right() and (self.include_root or len(st.stack) >= 3):
            cands |= {arc_symbol(("RA", r), self.notation) for r in self.d.labels}
        return cands

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        if self.state.can_shift() and symbol in self._token_candidate():
            self.state.apply(SH)
            return
        self.state.apply(parse_arc_symbol(symbol, self.notation))

    def vocabulary(self) -> tuple[str, ...]:
        arcs = []
        for r in self.d.labels:
            arcs.append(arc_symbol(("LA", r), self.notation))
            arcs.append(arc_symbol(("RA", r), self.notation))
        return frozen_vocab(("SH",), arcs, (EOS,))


class DepLtAutomaton(DepLsAutomaton):
    """Shift is spelled as the next source token, kept by an incremental offset."""

    def _token_candidate(self) -> set[str]:
        return {self.sent.token(self.state.next)}

    def vocabulary(self) -> tuple[str, ...]:
        arcs = []
        for r in self.d.labels:
            arcs.append(arc_symbol(("LA", r), self.notation))
            arcs.append(arc_symbol(("RA", r), self.notation))
        return frozen_vocab(self.sent.tokens, arcs, (EOS,))


class DepPtAutomaton(SchemaAutomaton):
    """Four-state phrase cycle (first operand, relation, second operand,
    separator) over a synchronized arc-standard system.

    Operand candidates are restricted to pairs the implicit shifts can
    actually realize: the top two stack items, or the stack top with the
    buffer head, or adjacent buffer items.  Tokens leave the candidate pool
    when they are popped, because popped ids appear in no further route.
    """

    def __init__(self, sent: Sentence, d: DescriptionDict, include_root: bool = True):
        super().__init__()
        self.sent = sent
        self.d = d
        self.include_root = include_root
        self.trie = relation_trie(d)
        self.state = ArcState(sent.n)
        self.phase = "open1" if sent.n else "stop"
        self.routes: list[tuple[int, int]] = []
        self.t1 = None
        self.node = None
        self.transition = None

    def _candidates(self) -> set[str]:
        if self.phase == "open1":
            cands = {OPEN_QUOTE}
            st = self.state
            if not self.include_root and len(st.arcs) == st.n - 1:
                if st.pending_root() or (st.stack == [0] and st.next == st.n):
                    cands.add(EOS)
            return cands
        if self.phase == "t1":
            return {_name(self.sent, first) for first, _ in self.routes}
        if self.phase == "rel":
            cands = set(self.node.children)
            if "is" in cands and not any(first != 0 for first, _ in self.routes):
                cands.discard("is")
            return cands
        if self.phase == "t2":
            return {_name(self.sent, second) for _, second in self.routes}
        if self.phase == "close2":
            return {CLOSE_QUOTE}
        if self.phase == "sep":
            st = self.state
            done = st.terminal() or (not self.include_root and st.pending_root())
            return {PERIOD} if done else {SEMICOLON}
        if self.phase == "stop":
            return {EOS}
        return set()

    def _apply(self, symbol: str) -> None:
        if symbol == EOS:
            return
        if self.phase == "open1":
            self.routes = _routes(self.state)
            self.phase = "t1"
            return
        if self.phase == "t1":
            self.routes = [r for r in self.routes if _name(self.sent, r[0]) == symbol]
            self.t1 = symbol
            self.node = self.trie.root
            self.phase = "rel"
            return
        if self.phase == "rel":
            self.node = self.node.children[symbol]
            if symbol == "is":
                self.routes = [r for r in self.routes if r[0] != 0]
            if self.node.terminal:
                self.transition = self.node.value
                self.phase = "t2"
            return
        if self.phase == "t2":
            self.routes = [r for r in self.routes if _name(self.sent, r[1]) == symbol]
            self.phase = "close2"
            return
        if self.phase == "close2":
            _apply_route(self.state, self.routes[0], self.transition)
            self.phase = "sep"
            return
        if self.phase == "sep":
            self.phase = "stop" if symbol == PERIOD else "open1"
            return

    def vocabulary(self) -> tuple[str, ...]:
        gloss = ["is", "has", "of"]
        for rel in self.d.labels:
            gloss.extend(self.d.phrase(rel))
        return frozen_vocab(
            (OPEN_QUOTE, CLOSE_QUOTE, SEMICOLON, PERIOD, SENTENCE_WORD),
            gloss,
            self.sent.tokens,
            (EOS,),
        )


def dep_automaton(
    sent: Sentence,
    mode: str,
    d: DescriptionDict,
    include_root: bool = True,
    notation: str = "angle",
) -> SchemaAutomaton:
    mode = mode.lower()
    if mode == "ls":
        return DepLsAutomaton(sent, d, include_root, notation)
    if mode == "lt":
        return DepLtAutomaton(sent, d, include_root, notation)
    if mode == "pt":
        return DepPtAutomaton(sent, d, include_root)
    raise ValueError(f"unknown schema mode {mode!r}")


def next_y_dep(state: SchemaAutomaton, sent: Sentence, y_prefix) -> set[str]:
    return state.next_candidates(list(y_prefix))
