"""Base machinery for schema automata.

An automaton enumerates, for the output prefix consumed so far, every symbol
that may legally come next.  Decoders drive it incrementally via ``advance``;
the ``next_candidates`` veneer accepts a full prefix so callers can also use
it statelessly.
"""
from __future__ import annotations

from .core import EOS


class InconsistentPrefix(ValueError):
    """The supplied prefix was not produced by this automaton (caller bug)."""

    def __init__(self, position: int, symbol: str, allowed):
        shown = sorted(allowed)[:8]
        super().__init__(
            f"symbol {symbol!r} at position {position} not among {len(allowed)} candidates "
            f"(e.g. {shown})"
        )
        self.position = position
        self.symbol = symbol


class SchemaAutomaton:
    """Stateful candidate-set automaton over one sentence."""

    def __init__(self):
        self._consumed: list[str] = []
        self.finished = False

    def candidates(self) -> set[str]:
        if self.finished:
            return set()
        return self._candidates()

    def advance(self, symbol: str) -> None:
        allowed = self.candidates()
        if symbol not in allowed:
            raise InconsistentPrefix(len(self._consumed), symbol, allowed)
        self._apply(symbol)
        self._consumed.append(symbol)
        if symbol == EOS:
            self.finished = True

    def next_candidates(self, prefix: list[str] | tuple[str, ...]) -> set[str]:
        """Candidates after ``prefix``, which must extend what was consumed so far."""
        prefix = list(prefix)
        if prefix[: len(self._consumed)] != self._consumed:
            raise InconsistentPrefix(0, "<prefix>", set())
        for symbol in prefix[len(self._consumed) :]:
            self.advance(symbol)
        return self.candidates()

    @property
    def consumed(self) -> tuple[str, ...]:
        return tuple(self._consumed)

    # subclasses implement:
    def _candidates(self) -> set[str]:
        raise NotImplementedError

    def _apply(self, symbol: str) -> None:
        raise NotImplementedError

    def vocabulary(self) -> tuple[str, ...]:
        """Every symbol this automaton could ever emit, in a frozen order."""
        raise NotImplementedError


def frozen_vocab(*groups) -> tuple[str, ...]:
    """Concatenate symbol groups, dropping duplicates, keeping first position."""
    seen = {}
    for group in groups:
        for sym in group:
            if sym not in seen:
                seen[sym] = None
    return tuple(seen)
