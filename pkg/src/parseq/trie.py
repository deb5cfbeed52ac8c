"""Token-level prefix tree with the matching primitives shared by all
prompt-schema decoders: plain prefix walking, longest prefix matching over
every start position, and partitioning an input into labeled and gap spans.

Spans are half-open ``(start, end)`` pairs of 0-based token offsets.
"""
from __future__ import annotations

from typing import Any, Iterable, Sequence


class TrieNode:
    __slots__ = ("children", "value", "terminal")

    def __init__(self):
        self.children: dict[str, TrieNode] = {}
        self.value: Any = None
        self.terminal = False

    def is_leaf(self) -> bool:
        return not self.children


class TokenTrie:
    def __init__(self, phrases: Iterable[tuple[Sequence[str], Any]] = ()):
        self.root = TrieNode()
        for phrase, value in phrases:
            self.insert(phrase, value)

    def insert(self, phrase: Sequence[str], value: Any = True) -> None:
        if not phrase:
            raise ValueError("cannot insert an empty phrase")
        node = self.root
        for tok in phrase:
            node = node.children.setdefault(tok, TrieNode())
        if node.terminal and node.value != value:
            raise ValueError(f"phrase {list(phrase)!r} already inserted with value {node.value!r}")
        node.terminal = True
        node.value = value

    def prefix_match(self, prefix: Sequence[str]) -> TrieNode | None:
        """Walk one child per token; None the moment a child is missing.

        The empty prefix matches the root.
        """
        node = self.root
        for tok in prefix:
            node = node.children.get(tok)
            if node is None:
                return None
        return node

    def longest_prefix_match(self, tokens: Sequence[str]) -> list[tuple[int, int, Any]]:
        """Report, for every start offset, the longest inserted phrase found there.

        Matches may overlap; they are returned in start order as
        ``(start, end, value)`` with ``end`` exclusive.
        """
        matches: list[tuple[int, int, Any]] = []
        for i in range(len(tokens)):
            node = self.root.children.get(tokens[i])
            if node is None:
                continue
            end, value = (i + 1, node.value) if node.terminal else (None, None)
            k = i + 1
            while k < len(tokens):
                node = node.children.get(tokens[k])
                if node is None:
                    break
                k += 1
                if node.terminal:
                    end, value = k, node.value
            if end is not None:
                matches.append((i, end, value))
        return matches

    def split(self, tokens: Sequence[str]) -> list[tuple[int, int, Any]]:
        """Partition ``tokens`` into labeled spans and null-payload gap spans.

        Overlapping matches are resolved left-to-right greedily: a match that
        starts inside an already-emitted labeled span is dropped.  The result
        is a contiguous, non-overlapping cover of the whole input.
        """
        spans: list[tuple[int, int, Any]] = []
        offset = 0
        for i, j, v in self.longest_prefix_match(tokens):
            if i < offset:
                continue
            if i > offset:
                spans.append((offset, i, None))
            spans.append((i, j, v))
            offset = j
        if offset < len(tokens):
            spans.append((offset, len(tokens), None))
        return spans
