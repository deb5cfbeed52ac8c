"""Task-independent structures, label inventories, and description dictionaries.

All structure types are immutable values; they can be shared freely between
threads once constructed.  Token positions are 1-based throughout (position 0
is reserved for the artificial dependency root).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

EOS = "EOS"
SEMICOLON = ";"
PERIOD = "."
COMMA = ","
OPEN_QUOTE = "``"
CLOSE_QUOTE = "''"

#: Symbols that belong to the output vocabulary and therefore may never occur
#: as input tokens.
RESERVED_TOKENS = frozenset({OPEN_QUOTE, CLOSE_QUOTE, EOS})


class StructureError(ValueError):
    """An input structure violates one of its invariants."""


class DictLoadError(ValueError):
    """A description-dictionary config is malformed or inconsistent."""


class MalformedOutputError(ValueError):
    """Strict delinearization failed.  Carries the offending symbol position."""

    def __init__(self, position: int, reason: str):
        super().__init__(f"position {position}: {reason}")
        self.position = position
        self.reason = reason


@dataclass(frozen=True)
class Sentence:
    """An input sentence of whole, whitespace-free tokens."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens:
            raise StructureError("sentence must contain at least one token")
        for tok in self.tokens:
            if not tok or any(c.isspace() for c in tok):
                raise StructureError(f"bad token {tok!r}: empty or contains whitespace")
            if SEMICOLON in tok:
                raise StructureError(f"bad token {tok!r}: contains reserved separator ';'")
            if tok in RESERVED_TOKENS:
                raise StructureError(f"bad token {tok!r}: reserved vocabulary item")

    @classmethod
    def of(cls, tokens: Iterable[str]) -> "Sentence":
        return cls(tuple(tokens))

    @classmethod
    def parse(cls, text: str) -> "Sentence":
        return cls(tuple(text.split()))

    @property
    def n(self) -> int:
        return len(self.tokens)

    def token(self, i: int) -> str:
        """Token at 1-based position ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"token position {i} out of range 1..{self.n}")
        return self.tokens[i - 1]

    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class PosSequence:
    tags: tuple[str, ...]

    @classmethod
    def of(cls, tags: Iterable[str]) -> "PosSequence":
        return cls(tuple(tags))


class Entity(NamedTuple):
    start: int  # 1-based, inclusive
    end: int  # 1-based, inclusive
    label: str


@dataclass(frozen=True)
class EntitySet:
    entities: tuple[Entity, ...]

    @classmethod
    def of(cls, spans: Iterable[tuple[int, int, str]]) -> "EntitySet":
        return cls(tuple(Entity(*s) for s in spans))


@dataclass(frozen=True)
class ConNode:
    """A constituent.  Children are nested nodes or 1-based terminal indices."""

    label: str
    children: tuple[Union["ConNode", int], ...]

    def constituents(self):
        """Yield this node and every constituent below it, pre-order."""
        yield self
        for c in self.children:
            if isinstance(c, ConNode):
                yield from c.constituents()

    def terminals(self) -> list[int]:
        out: list[int] = []
        for c in self.children:
            if isinstance(c, ConNode):
                out.extend(c.terminals())
            else:
                out.append(c)
        return out

    def all_terminal(self) -> bool:
        return all(not isinstance(c, ConNode) for c in self.children)


TOP = "TOP"


@dataclass(frozen=True)
class ConTree:
    """A constituency tree rooted at TOP, with the POS level already removed."""

    root: ConNode

    @property
    def n(self) -> int:
        return len(self.root.terminals())

    def pretty(self, sent: "Sentence") -> str:
        def render(node):
            if isinstance(node, int):
                return sent.token(node)
            inner = " ".join(render(c) for c in node.children)
            return f"({node.label} {inner})"

        return render(self.root)


@dataclass(frozen=True)
class DepTree:
    """Single-rooted dependency tree: 1-based heads with 0 the artificial root."""

    heads: tuple[int, ...]
    rels: tuple[str, ...]

    @classmethod
    def of(cls, heads: Iterable[int], rels: Iterable[str]) -> "DepTree":
        return cls(tuple(heads), tuple(rels))

    @property
    def n(self) -> int:
        return len(self.heads)

    def root(self) -> int:
        """1-based position of the word attached to the artificial root."""
        return self.heads.index(0) + 1


Structure = Union[PosSequence, EntitySet, ConTree, DepTree]


def is_projective(heads: Iterable[int]) -> bool:
    """True iff every token between a head and its dependent descends from that head."""
    heads = list(heads)
    n = len(heads)

    def dominated_by(k: int, h: int) -> bool:
        seen = 0
        while k != 0:
            if k == h:
                return True
            k = heads[k - 1]
            seen += 1
            if seen > n:  # cycle; caller validates separately
                return False
        return h == 0

    for dep in range(1, n + 1):
        head = heads[dep - 1]
        lo, hi = min(head, dep), max(head, dep)
        for k in range(lo + 1, hi):
            if not dominated_by(k, head):
                return False
    return True


def validate_structure(structure: Structure, sent: Sentence) -> list[str]:
    """Return every invariant violation of ``structure`` against ``sent``.

    An empty list means the structure is valid.  Violations are data, not
    exceptions: callers decide whether to raise.
    """
    n = sent.n
    problems: list[str] = []

    if isinstance(structure, PosSequence):
        if len(structure.tags) != n:
            problems.append(f"tag count {len(structure.tags)} != sentence length {n}")
        for i, t in enumerate(structure.tags, 1):
            if not t:
                problems.append(f"empty tag at position {i}")

    elif isinstance(structure, EntitySet):
        prev_end = 0
        for ent in structure.entities:
            if not (1 <= ent.start <= ent.end <= n):
                problems.append(f"span {ent} out of range 1..{n}")
                continue
            if ent.start <= prev_end:
                problems.append(f"span {ent} overlaps or is out of order")
            prev_end = max(prev_end, ent.end)

    elif isinstance(structure, ConTree):
        if structure.root.label != TOP:
            problems.append(f"root label {structure.root.label!r} != {TOP!r}")
        terms = structure.root.terminals()
        if terms != list(range(1, n + 1)):
            problems.append(f"terminals {terms} do not cover 1..{n} in order")
        for node in structure.root.constituents():
            if not node.children:
                problems.append(f"constituent {node.label} has zero children")

    elif isinstance(structure, DepTree):
        if len(structure.heads) != n or len(structure.rels) != n:
            problems.append(f"arity {len(structure.heads)} != sentence length {n}")
            return problems
        roots = [i for i, h in enumerate(structure.heads, 1) if h == 0]
        if len(roots) != 1:
            problems.append(f"expected exactly one root, found {len(roots)}")
        for i, h in enumerate(structure.heads, 1):
            if not 0 <= h <= n:
                problems.append(f"head {h} of token {i} out of range")
            if h == i:
                problems.append(f"token {i} is its own head")
        # cycle check via repeated head chasing
        for i in range(1, n + 1):
            seen = set()
            k = i
            while k != 0:
                if k in seen:
                    problems.append(f"cycle through token {i}")
                    break
                seen.add(k)
                h = structure.heads[k - 1]
                if not 0 <= h <= n:
                    break
                k = h
        if not problems and not is_projective(structure.heads):
            problems.append("tree is not projective")

    else:
        problems.append(f"unknown structure type {type(structure).__name__}")
    return problems


# ---------------------------------------------------------------------------
# Canonical JSON


def structure_to_obj(structure: Structure):
    if isinstance(structure, PosSequence):
        return {"tags": list(structure.tags)}
    if isinstance(structure, EntitySet):
        return {"entities": [{"start": e.start, "end": e.end, "label": e.label} for e in structure.entities]}
    if isinstance(structure, ConTree):

        def enc(node):
            if isinstance(node, int):
                return node
            return {"label": node.label, "children": [enc(c) for c in node.children]}

        return enc(structure.root)
    if isinstance(structure, DepTree):
        return {"heads": list(structure.heads), "rels": list(structure.rels)}
    raise TypeError(type(structure).__name__)


def structure_from_obj(obj) -> Structure:
    if "tags" in obj:
        return PosSequence.of(obj["tags"])
    if "entities" in obj:
        return EntitySet.of((e["start"], e["end"], e["label"]) for e in obj["entities"])
    if "heads" in obj:
        return DepTree.of(obj["heads"], obj["rels"])
    if "label" in obj:

        def dec(o):
            if isinstance(o, int):
                return o
            return ConNode(o["label"], tuple(dec(c) for c in o["children"]))

        return ConTree(dec(obj))
    raise ValueError(f"unrecognized structure object: {sorted(obj)}")


def to_canonical_json(structure: Structure) -> str:
    return json.dumps(structure_to_obj(structure), sort_keys=True, separators=(",", ":"))


def from_canonical_json(text: str) -> Structure:
    return structure_from_obj(json.loads(text))


# ---------------------------------------------------------------------------
# Description dictionaries


class Description(NamedTuple):
    surface: str
    article: str  # "a" | "an"

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.surface.split())


@dataclass(frozen=True)
class DescriptionDict:
    """Maps each label of one task to a natural-language surface plus article.

    Surfaces must be unique and prefix-free in token space so that trie
    matching over them is unambiguous; both properties are checked at load.
    """

    task: str
    entries: dict[str, Description]
    default_label: str | None = None

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.entries)

    def describe(self, label: str) -> Description:
        try:
            return self.entries[label]
        except KeyError:
            raise DictLoadError(f"task {self.task}: label {label!r} not in dictionary") from None

    def phrase(self, label: str) -> tuple[str, ...]:
        """Article + surface tokens, e.g. ``("a", "possessive", "pronoun")``."""
        d = self.describe(label)
        return (d.article,) + d.tokens

    def label_of_surface(self, surface_tokens: tuple[str, ...]) -> str | None:
        for label, d in self.entries.items():
            if d.tokens == tuple(surface_tokens):
                return label
        return None

    def with_overrides(self, overrides: dict[str, Description], default_label: str | None = None) -> "DescriptionDict":
        merged = dict(self.entries)
        merged.update(overrides)
        return build_description_dict(self.task, merged, default_label or self.default_label)

    def decreased_lexicality(self) -> "DescriptionDict":
        """Replace every surface with its raw label string, keeping articles."""
        entries = {label: Description(label, d.article) for label, d in self.entries.items()}
        return build_description_dict(self.task, entries, self.default_label)


def _check_entries(task: str, entries: dict[str, Description]):
    seen: dict[str, str] = {}
    for label, d in entries.items():
        if not d.tokens:
            raise DictLoadError(f"task {task}: label {label!r} has an empty surface")
        if d.article not in ("a", "an"):
            raise DictLoadError(f"task {task}: label {label!r} has bad article {d.article!r}")
        if SEMICOLON in d.surface:
            raise DictLoadError(f"task {task}: surface {d.surface!r} contains ';'")
        if d.surface in seen:
            raise DictLoadError(
                f"task {task}: labels {seen[d.surface]!r} and {label!r} share surface {d.surface!r}"
            )
        seen[d.surface] = label
    tok_lists = {label: d.tokens for label, d in entries.items()}
    for la, ta in tok_lists.items():
        for lb, tb in tok_lists.items():
            if la != lb and len(ta) < len(tb) and tb[: len(ta)] == ta:
                raise DictLoadError(
                    f"task {task}: surface of {la!r} is a token prefix of the surface of {lb!r}"
                )


def build_description_dict(
    task: str, entries: dict[str, Description], default_label: str | None = None
) -> DescriptionDict:
    _check_entries(task, entries)
    if default_label is not None and default_label not in entries:
        raise DictLoadError(f"task {task}: default label {default_label!r} missing from dictionary")
    return DescriptionDict(task, dict(entries), default_label)


def load_description_dict(
    task: str,
    source: str,
    required: Iterable[str] | None = None,
    default_label: str | None = None,
) -> DescriptionDict:
    """Parse a key/value config document into a validated dictionary.

    One entry per line, ``LABEL = article surface words``.  Blank lines are
    ignored, as are ``#`` comment lines (a line starting with ``#`` that also
    contains ``=`` is an entry, so ``#`` itself can be a label).  ``required``
    labels missing from the source raise a load error naming the first absent
    label.
    """
    entries: dict[str, Description] = {}
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line or (line.startswith("#") and "=" not in line):
            continue
        if "=" not in line:
            raise DictLoadError(f"task {task}: line {lineno}: expected 'LABEL = article surface'")
        label, _, value = line.partition("=")
        label = label.strip()
        parts = value.split()
        if not label or len(parts) < 2:
            raise DictLoadError(f"task {task}: line {lineno}: expected 'LABEL = article surface'")
        if label in entries:
            raise DictLoadError(f"task {task}: line {lineno}: duplicate label {label!r}")
        entries[label] = Description(" ".join(parts[1:]), parts[0])
    if required is not None:
        for label in required:
            if label not in entries:
                raise DictLoadError(f"task {task}: label {label!r} missing from config")
    return build_description_dict(task, entries, default_label)


@dataclass(frozen=True)
class OutputSequence:
    """A generated symbol sequence.  Well-formed sequences end with one EOS."""

    symbols: tuple[str, ...]

    @classmethod
    def of(cls, symbols: Iterable[str]) -> "OutputSequence":
        return cls(tuple(symbols))

    def validate(self) -> list[str]:
        problems = []
        if self.symbols.count(EOS) != 1:
            problems.append(f"EOS occurs {self.symbols.count(EOS)} times, expected 1")
        elif self.symbols[-1] != EOS:
            problems.append("EOS is not the final symbol")
        return problems

    @property
    def body(self) -> tuple[str, ...]:
        """Symbols without the trailing EOS (if present)."""
        if self.symbols and self.symbols[-1] == EOS:
            return self.symbols[:-1]
        return self.symbols

    def text(self) -> str:
        return " ".join(self.symbols)
