"""Constituency schema codecs: top-down shift-reduce LS/LT and the prompt
codec with its reverse parser.

The transition system keeps a stack of (item, depth) pairs, a buffer of
source tokens, and a depth counter d.  Node-X pushes a fresh depth-d
constituent and deepens; Shift pushes the next token at depth d; Reduce pops
the whole depth-d group into the constituent right below it and shallows.
No constrained decoding is provided for this task: sequences are validated
by strict replay instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    CLOSE_QUOTE,
    COMMA,
    EOS,
    OPEN_QUOTE,
    PERIOD,
    SEMICOLON,
    TOP,
    ConNode,
    ConTree,
    DescriptionDict,
    MalformedOutputError,
    OutputSequence,
    Sentence,
)
from .trie import TokenTrie

SHIFT = ("SH",)
REDUCE = ("RE",)
FALLBACK_LABEL = "X"
ROOT_MARK = "<root>"  # trie payload for "the sentence" phrases


def node_transition(label: str) -> tuple[str, str]:
    return ("N", label)


class TransitionError(ValueError):
    pass


@dataclass
class _MNode:
    label: str
    children: list = field(default_factory=list)
    parent: "_MNode | None" = None

    def freeze(self) -> ConNode:
        return ConNode(
            self.label,
            tuple(c.freeze() if isinstance(c, _MNode) else c for c in self.children),
        )


class ConState:
    """Mutable top-down shift-reduce state over one sentence."""

    def __init__(self, sent: Sentence):
        self.sent = sent
        self.top = _MNode(TOP)
        self.stack: list[tuple[object, int]] = [(self.top, 0)]
        self.next_token = 1
        self.d = 1

    def apply(self, transition: tuple) -> "ConState":
        kind = transition[0]
        if kind == "N":
            self.stack.append((_MNode(transition[1]), self.d))
            self.d += 1
        elif kind == "SH":
            if self.next_token > self.sent.n:
                raise TransitionError("shift with an empty buffer")
            self.stack.append((self.next_token, self.d))
            self.next_token += 1
        elif kind == "RE":
            if self.d < 2:
                raise TransitionError("reduce at depth 1")
            group = []
            while self.stack and self.stack[-1][1] == self.d:
                group.append(self.stack.pop()[0])
            if not group:
                raise TransitionError(f"reduce with no depth-{self.d} elements")
            parent = self.stack[-1][0]
            if not isinstance(parent, _MNode):
                raise TransitionError("reduce onto a terminal")
            parent.children.extend(reversed(group))
            self.d -= 1
        else:
            raise TransitionError(f"unknown transition {transition!r}")
        return self

    def finalize(self) -> ConTree:
        if self.next_token != self.sent.n + 1:
            raise TransitionError(f"only {self.next_token - 1} of {self.sent.n} tokens shifted")
        if self.d != 1:
            raise TransitionError(f"unclosed constituents (depth {self.d})")
        if len(self.stack) == 1:
            raise TransitionError("empty derivation")
        self.top.children = [item for item, _ in self.stack[1:]]
        return ConTree(self.top.freeze())


def con_apply(state: ConState, transition: tuple) -> ConState:
    """Apply one N-X / SH / RE transition, raising on illegal moves."""
    return state.apply(transition)


def oracle_transitions(tree: ConTree) -> list[tuple]:
    out: list[tuple] = []

    def walk(item):
        if isinstance(item, ConNode):
            out.append(node_transition(item.label))
            for c in item.children:
                walk(c)
            out.append(REDUCE)
        else:
            out.append(SHIFT)

    for child in tree.root.children:
        walk(child)
    return out


def constituent_count(tree: ConTree) -> int:
    """Constituents below TOP (the C in |LS| = 2C + n)."""
    return sum(1 for _ in tree.root.constituents()) - 1


def linearize_con(sent: Sentence, tree: ConTree, mode: str) -> OutputSequence:
    mode = mode.lower()
    out: list[str] = []
    cursor = 1
    for t in oracle_transitions(tree):
        if t[0] == "N":
            out.append(f"N-{t[1]}" if mode == "ls" else f"({t[1]}")
        elif t[0] == "SH":
            out.append("SH" if mode == "ls" else sent.token(cursor))
            cursor += 1
        else:
            out.append("RE" if mode == "ls" else ")")
    if mode not in ("ls", "lt"):
        raise ValueError(f"unknown schema mode {mode!r} (use linearize_con_pt for prompts)")
    out.append(EOS)
    return OutputSequence.of(out)


def _parse_symbol(sym: str, mode: str) -> tuple:
    if mode == "ls":
        if sym == "SH":
            return SHIFT
        if sym == "RE":
            return REDUCE
        if sym.startswith("N-") and len(sym) > 2:
            return node_transition(sym[2:])
        raise MalformedOutputError(0, f"unknown transition symbol {sym!r}")
    if sym == ")":
        return REDUCE
    if sym.startswith("(") and len(sym) > 1:
        return node_transition(sym[1:])
    return SHIFT


def delinearize_con(
    sent: Sentence, out: OutputSequence, mode: str, lenient: bool = False
) -> ConTree:
    mode = mode.lower()
    if mode not in ("ls", "lt"):
        raise ValueError(f"unknown schema mode {mode!r} (use reverse_con_pt for prompts)")
    if not lenient:
        problems = out.validate()
        if problems:
            raise MalformedOutputError(len(out.symbols), problems[0])
    state = ConState(sent)
    for pos, sym in enumerate(s for s in out.symbols if s != EOS):
        try:
            t = _parse_symbol(sym, mode)
        except MalformedOutputError as exc:
            if lenient:
                continue
            raise MalformedOutputError(pos, exc.reason) from None
        if mode == "lt" and t == SHIFT and not lenient:
            if state.next_token > sent.n or sym != sent.token(state.next_token):
                raise MalformedOutputError(pos, f"unexpected terminal {sym!r}")
        try:
            state.apply(t)
        except TransitionError as exc:
            if lenient:
                continue
            raise MalformedOutputError(pos, str(exc)) from None
    if lenient:
        return _lenient_finalize(state)
    try:
        return state.finalize()
    except TransitionError as exc:
        raise MalformedOutputError(len(out.symbols), str(exc)) from None


def _lenient_finalize(state: ConState) -> ConTree:
    # close whatever is still open, pruning constituents that never got children
    while state.d > 1:
        if any(depth == state.d for _, depth in state.stack):
            state.apply(REDUCE)
        else:
            item, _ = state.stack.pop()
            state.d -= 1
    leftovers = list(range(state.next_token, state.sent.n + 1))
    items = [item for item, _ in state.stack[1:]]
    items = [i for i in items if not (isinstance(i, _MNode) and not i.children)]
    if leftovers:
        items.append(_MNode(FALLBACK_LABEL, leftovers))
    if not items:
        items = [_MNode(FALLBACK_LABEL, list(range(1, state.sent.n + 1)))]
    state.top.children = items
    return ConTree(state.top.freeze())


# ---------------------------------------------------------------------------
# Prompt codec


def _terminal_runs(children) -> list[list]:
    """Group children into maximal runs of terminals and single constituents."""
    groups: list[list] = []
    for c in children:
        if isinstance(c, ConNode):
            groups.append([c])
        elif groups and not isinstance(groups[-1][0], ConNode):
            groups[-1].append(c)
        else:
            groups.append([c])
    return groups


def _needs_description(node: ConNode) -> bool:
    return not node.all_terminal()


def _root_constituent(tree: ConTree) -> ConNode:
    kids = tree.root.children
    if len(kids) != 1 or not isinstance(kids[0], ConNode):
        raise ValueError("prompt schema requires a single constituent under the root")
    return kids[0]


def linearize_con_pt(
    sent: Sentence, tree: ConTree, d: DescriptionDict, which: bool = True
) -> OutputSequence:
    """Describe the tree top-down as "<parent> has <children>" sentences.

    New constituents are introduced with an indefinite article and described
    in a later sentence, except that a trailing child with no described
    siblings is chained in place with ", which has ...".  Constituents made
    only of terminals are mentioned inline as "the <gloss> `` span ''".
    Disabling ``which`` defers every description to its own sentence.
    """
    root_c = _root_constituent(tree)
    out: list[str] = []

    def quoted(idxs) -> list[str]:
        return [OPEN_QUOTE, *(sent.token(i) for i in idxs), CLOSE_QUOTE]

    def describe(node: ConNode, opener: list[str]):
        out.extend(opener)
        groups = _terminal_runs(node.children)
        chain_child = None
        if which and groups and isinstance(groups[-1][0], ConNode):
            last = groups[-1][0]
            earlier = [g[0] for g in groups[:-1] if isinstance(g[0], ConNode)]
            if _needs_description(last) and not any(_needs_description(e) for e in earlier):
                chain_child = last
        deferred = []
        for gi, group in enumerate(groups):
            if gi:
                out.append("and")
            head = group[0]
            if not isinstance(head, ConNode):
                out.extend(quoted(group))
            elif not _needs_description(head):
                out.extend(["the", *d.describe(head.label).tokens])
                out.extend(quoted(head.terminals()))
            elif head is chain_child:
                out.extend(["the", *d.describe(head.label).tokens])
            else:
                out.extend(d.phrase(head.label))
                deferred.append(head)
        if chain_child is not None:
            describe(chain_child, [COMMA, "which", "has"])
        for child in deferred:
            out.append(SEMICOLON)
            describe(child, ["the", *d.describe(child.label).tokens, "has"])

    describe(root_c, ["the", "sentence", "has"])
    out.append(PERIOD)
    out.append(EOS)
    return OutputSequence.of(out)


def label_trie(d: DescriptionDict) -> TokenTrie:
    """Definite and indefinite article versions of every constituent gloss."""
    trie = TokenTrie()
    for label in d.labels:
        toks = d.describe(label).tokens
        for art in ("the", "a", "an"):
            trie.insert((art,) + toks, (label, art == "the"))
    for art in ("the", "a", "an"):
        trie.insert((art, "sentence"), (ROOT_MARK, art == "the"))
    return trie


def _find_target(parent: _MNode | None, label: str) -> _MNode | None:
    """Search an undescribed constituent among children of ``parent`` and of
    each of its ancestors, nearest first."""
    node = parent
    while node is not None:
        for child in node.children:
            if isinstance(child, _MNode) and child.label == label and not child.children:
                return child
        node = node.parent
    return None


def _strip_connectives(tokens: list[str]) -> list[str]:
    i = 0
    while i < len(tokens) and tokens[i] in (COMMA, "and", SEMICOLON):
        i += 1
    return tokens[i:]


def reverse_con_pt(
    sent: Sentence,
    out: OutputSequence,
    d: DescriptionDict,
    strict: bool = True,
    root_label: str = "S",
) -> ConTree:
    """Rebuild a tree from a prompt paragraph.

    The paragraph is partitioned by the label trie.  A definite mention binds
    to the nearest undescribed constituent of that label unless its
    continuation shows it is new (an inline quoted span, or an immediate
    ", which has" description); indefinite mentions always create.  Text
    spans starting with "has"/"which has" re-root attachment to the latest
    constituent.  A quoted group right after a mention or a "has" fills that
    constituent; one introduced by a connective is a sibling mention and
    fills the constituent under description.  Quoted tokens are anchored to
    their first unused occurrence in the sentence.
    """
    body = [s for s in out.symbols if s != EOS]
    spans = label_trie(d).split(body)
    top = _MNode(TOP)
    parent: _MNode = top
    latest: _MNode | None = None
    used = [False] * (sent.n + 1)

    def take(tok: str) -> int | None:
        for i in range(1, sent.n + 1):
            if not used[i] and sent.token(i) == tok:
                used[i] = True
                return i
        return None

    def following_text(idx: int) -> list[str]:
        if idx + 1 < len(spans) and spans[idx + 1][2] is None:
            i, j, _ = spans[idx + 1]
            return body[i:j]
        return []

    def fail(pos: int, reason: str):
        raise MalformedOutputError(pos, reason)

    for idx, (i, j, value) in enumerate(spans):
        if value is not None:
            label, definite = value
            tail = _strip_connectives(following_text(idx))
            introduces = (
                not definite
                or (tail[:1] == [OPEN_QUOTE])
                or (tail[:2] == ["which", "has"])
            )
            if label == ROOT_MARK:
                existing = next((c for c in top.children if isinstance(c, _MNode)), None)
                if existing is None:
                    latest = _MNode(root_label, parent=top)
                    top.children.append(latest)
                else:
                    latest = existing
                continue
            if introduces:
                latest = _MNode(label, parent=parent)
                parent.children.append(latest)
            else:
                target = _find_target(parent, label)
                if target is None:
                    if strict:
                        fail(i, f"unresolvable reference to {label!r}")
                    latest = _MNode(label, parent=parent)
                    parent.children.append(latest)
                else:
                    latest = target
        else:
            text = body[i:j]
            head = _strip_connectives(text)
            if head[:2] == ["which", "has"] or head[:1] == ["has"]:
                if latest is None:
                    fail(i, "attachment before any constituent")
                parent = latest
                group_target = parent
            elif text[:1] == [OPEN_QUOTE]:
                group_target = latest  # inline span of the mention just made
            else:
                group_target = parent
            in_quote = False
            for pos, tok in enumerate(text, start=i):
                if tok == OPEN_QUOTE:
                    in_quote = True
                elif tok == CLOSE_QUOTE:
                    in_quote = False
                    group_target = parent  # later groups are sibling mentions
                elif in_quote:
                    if group_target is None:
                        fail(pos, "quoted token before any constituent")
                    index = take(tok)
                    if index is not None:
                        group_target.children.append(index)
                    elif strict:
                        fail(pos, f"no unused occurrence of quoted token {tok!r}")

    if strict:
        if not all(used[1:]):
            missing = used[1:].index(False) + 1
            fail(len(body), f"token {sent.token(missing)!r} never quoted")
        for node in top.children:
            _check_filled(node)
        tree = ConTree(top.freeze())
        from .core import validate_structure

        problems = validate_structure(tree, sent)
        if problems:
            fail(len(body), problems[0])
        return tree
    _prune_empty(top)
    leftovers = [i for i in range(1, sent.n + 1) if not used[i]]
    if leftovers:
        anchor = next((c for c in top.children if isinstance(c, _MNode)), None)
        holder = _MNode(FALLBACK_LABEL, leftovers)
        (anchor or top).children.append(holder)
    if not top.children:
        top.children = [_MNode(FALLBACK_LABEL, list(range(1, sent.n + 1)))]
    tree = ConTree(top.freeze())
    from .core import validate_structure

    if validate_structure(tree, sent):
        flat = _MNode(TOP, [_MNode(FALLBACK_LABEL, list(range(1, sent.n + 1)))])
        return ConTree(flat.freeze())
    return tree


def _check_filled(node):
    if isinstance(node, _MNode):
        if not node.children:
            raise MalformedOutputError(0, f"constituent {node.label!r} mentioned but never described")
        for c in node.children:
            _check_filled(c)


def _prune_empty(node: _MNode):
    kept = []
    for c in node.children:
        if isinstance(c, _MNode):
            _prune_empty(c)
            if not c.children:
                continue
        kept.append(c)
    node.children = kept
