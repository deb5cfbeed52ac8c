"""Treebank and corpus readers/writers.

Readers validate against the core invariants and refuse silently broken
records; the two documented exceptions are IOB repair (a dangling I- tag
opens a span) and the optional dropping of non-projective dependency trees.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import (
    TOP,
    ConNode,
    ConTree,
    DepTree,
    EntitySet,
    PosSequence,
    Sentence,
    Structure,
    StructureError,
    is_projective,
    load_description_dict,
    structure_from_obj,
    structure_to_obj,
    validate_structure,
)
from .ner import spans_from_bieos
from .profiles import CON_DEFAULT, POS_DEFAULT

#: Labels treated as the removable pre-terminal (tag) level in bracketed
#: trees.  Labels that double as constituent labels are never stripped.
PTB_TAGS = (
    frozenset(load_description_dict("pos", POS_DEFAULT).labels)
    | {
        "PRON",
        "NOUN",
        "VERB",
        "ADJ",
        "ADV",
        "ADP",
        "DET",
        "CONJ",
        "CCONJ",
        "SCONJ",
        "NUM",
        "PART",
        "PUNCT",
        "PROPN",
        "AUX",
        "HYPH",
        "NFP",
        "ADD",
        "AFX",
    }
) - frozenset(load_description_dict("con", CON_DEFAULT).labels)

#: Records longer than this many tokens are dropped with a warning.
DEFAULT_TOKEN_BUDGET = 512


class ReadError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


@dataclass
class CorpusRecord:
    sentence: Sentence
    provenance: str = ""
    pos: PosSequence | None = None
    entities: EntitySet | None = None
    tree: ConTree | None = None
    dep: DepTree | None = None

    def gold(self, task: str) -> Structure:
        value = {"pos": self.pos, "ner": self.entities, "con": self.tree, "dep": self.dep}[task]
        if value is None:
            raise KeyError(f"record {self.provenance!r} has no {task} annotation")
        return value

    def has(self, task: str) -> bool:
        return {"pos": self.pos, "ner": self.entities, "con": self.tree, "dep": self.dep}[task] is not None

    def validate(self) -> list[str]:
        problems = []
        for s in (self.pos, self.entities, self.tree, self.dep):
            if s is not None:
                problems.extend(validate_structure(s, self.sentence))
        return problems


# ---------------------------------------------------------------------------
# Bracketed constituency trees


def _tokenize_brackets(text: str) -> Iterator[tuple[int, str]]:
    line = 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c.isspace():
            i += 1
        elif c in "()":
            yield line, c
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield line, text[i:j]
            i = j


def read_bracketed(
    text: str, strip_tags: bool = True, token_budget: int = DEFAULT_TOKEN_BUDGET
) -> list[tuple[Sentence, ConTree, PosSequence | None]]:
    """Parse PTB-style bracketed trees.

    The pre-terminal tag level is removed and its children rewired to the
    parent; the stripped tags are returned as the gold tag sequence when the
    whole tree carried one tag per token.
    """
    results = []
    stack: list[list] = []
    start_line = 1
    for line, tok in _tokenize_brackets(text):
        if tok == "(":
            if not stack:
                start_line = line
            stack.append(["?"])
        elif tok == ")":
            if not stack:
                raise ReadError(line, "unbalanced ')'")
            node = stack.pop()
            if len(node) == 1:
                raise ReadError(line, "empty constituent")
            if stack:
                stack[-1].append(node)
            else:
                results.append((start_line, node))
        else:
            if not stack:
                raise ReadError(line, f"token {tok!r} outside any tree")
            if stack[-1][0] == "?":
                stack[-1][0] = tok
            else:
                stack[-1].append(tok)
    if stack:
        raise ReadError(start_line, "unbalanced '('")

    out = []
    for start_line, raw in results:
        tokens: list[str] = []
        tags: list[str] = []
        clean = True

        def build(node):
            nonlocal clean
            label = node[0]
            kids = node[1:]
            if strip_tags and label in PTB_TAGS and len(kids) == 1 and isinstance(kids[0], str):
                tokens.append(kids[0])
                tags.append(label)
                return len(tokens)
            children = []
            for k in kids:
                if isinstance(k, str):
                    tokens.append(k)
                    clean = False
                    children.append(len(tokens))
                else:
                    children.append(build(k))
            return ConNode(label, tuple(children))

        root = build(raw)
        if isinstance(root, int):
            raise ReadError(start_line, "tree reduces to a bare token")
        if root.label in ("?", TOP):  # unlabeled outer shell
            root = ConNode(TOP, root.children)
        else:
            root = ConNode(TOP, (root,))
        if _over_budget(len(tokens), token_budget, start_line):
            continue
        sent = Sentence.of(tokens)
        tree = ConTree(root)
        problems = validate_structure(tree, sent)
        if problems:
            raise ReadError(start_line, problems[0])
        out.append((sent, tree, PosSequence.of(tags) if clean and tags else None))
    return out


def write_bracketed(sent: Sentence, tree: ConTree) -> str:
    def render(node) -> str:
        if isinstance(node, int):
            return sent.token(node)
        inner = " ".join(render(c) for c in node.children)
        return f"({node.label} {inner})"

    inner = " ".join(render(c) for c in tree.root.children)
    return f"({TOP} {inner})"


# ---------------------------------------------------------------------------
# CoNLL columns


def _over_budget(n: int, budget: int, line_no: int) -> bool:
    if n <= budget:
        return False
    import sys

    print(f"warning: dropping record at line {line_no}: {n} tokens over budget", file=sys.stderr)
    return True


def read_conll_ner(
    text: str, token_budget: int = DEFAULT_TOKEN_BUDGET
) -> list[tuple[Sentence, EntitySet]]:
    """Token-per-line records, NER tag in the last column, blank-line separated.

    IOB and BIEOS inputs are both accepted; a dangling I- tag starts a span
    (the standard repair).
    """
    out = []
    tokens: list[str] = []
    tags: list[str] = []

    def flush(line_no: int):
        if not tokens:
            return
        if _over_budget(len(tokens), token_budget, line_no):
            tokens.clear()
            tags.clear()
            return
        normalized = []
        prev = "O"
        for i, t in enumerate(tags):
            prefix, _, kind = t.partition("-")
            if prefix not in ("B", "I", "E", "S", "O"):
                raise ReadError(line_no, f"unknown tag prefix {t!r}")
            if prefix == "I" and prev.partition("-")[2] != kind:
                t = f"B-{kind}"
            normalized.append(t)
            prev = t
        spans = spans_from_bieos(_iob_to_bieos(normalized), strict=False)
        out.append((Sentence.of(tokens), EntitySet.of(spans)))
        tokens.clear()
        tags.clear()

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            flush(line_no)
            continue
        cols = line.split()
        if len(cols) < 2:
            raise ReadError(line_no, f"expected at least 2 columns, got {len(cols)}")
        tokens.append(cols[0])
        tags.append(cols[-1])
    flush(len(text.splitlines()))
    return out


def _iob_to_bieos(tags: list[str]) -> list[str]:
    out = []
    for i, t in enumerate(tags):
        prefix, _, kind = t.partition("-")
        nxt = tags[i + 1] if i + 1 < len(tags) else "O"
        nxt_prefix, _, nxt_kind = nxt.partition("-")
        continues = nxt_prefix in ("I", "E") and nxt_kind == kind
        if prefix == "B":
            out.append(t if continues else f"S-{kind}")
        elif prefix == "I":
            out.append(f"I-{kind}" if continues else f"E-{kind}")
        else:
            out.append(t)
    return out


def read_conll_dep(
    text: str, drop_nonprojective: bool = False, token_budget: int = DEFAULT_TOKEN_BUDGET
) -> list[tuple[Sentence, DepTree, bool]]:
    """ID/FORM/.../HEAD/DEPREL columns (CoNLL-X positions, or a 4-column
    simplification).  Returns (sentence, tree, projective) triples; with
    ``drop_nonprojective`` the non-projective records are removed instead of
    flagged."""
    out = []
    rows: list[tuple[int, str, int, str]] = []

    def flush(line_no: int):
        if not rows:
            return
        if _over_budget(len(rows), token_budget, line_no):
            rows.clear()
            return
        rows.sort()
        ids = [r[0] for r in rows]
        if ids != list(range(1, len(rows) + 1)):
            raise ReadError(line_no, f"token ids {ids} are not 1..n")
        heads = [r[2] for r in rows]
        rels = [r[3] for r in rows]
        n = len(rows)
        for h in heads:
            if not 0 <= h <= n:
                raise ReadError(line_no, f"head {h} out of range 0..{n}")
        sent = Sentence.of([r[1] for r in rows])
        tree = DepTree.of(heads, rels)
        problems = [p for p in validate_structure(tree, sent) if "projective" not in p]
        if problems:
            raise ReadError(line_no, problems[0])
        projective = is_projective(heads)
        if projective or not drop_nonprojective:
            out.append((sent, tree, projective))
        rows.clear()

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            flush(line_no)
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t") if "\t" in line else line.split()
        if len(cols) >= 10:
            idx, form, head, rel = cols[0], cols[1], cols[6], cols[7]
        elif len(cols) == 4:
            idx, form, head, rel = cols
        else:
            raise ReadError(line_no, f"expected 4 or >=10 columns, got {len(cols)}")
        if "-" in idx or "." in idx:
            continue  # multiword/empty nodes are not tokens
        try:
            rows.append((int(idx), form, int(head), rel))
        except ValueError:
            raise ReadError(line_no, f"non-numeric id or head in {line!r}") from None
    flush(len(text.splitlines()))
    return out


def write_conll_dep(sent: Sentence, tree: DepTree) -> str:
    lines = []
    for i in range(1, sent.n + 1):
        lines.append(f"{i}\t{sent.token(i)}\t{tree.heads[i - 1]}\t{tree.rels[i - 1]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSONL corpus


def record_to_obj(rec: CorpusRecord) -> dict:
    obj: dict = {"id": rec.provenance, "tokens": list(rec.sentence.tokens)}
    if rec.pos is not None:
        obj["pos"] = structure_to_obj(rec.pos)
    if rec.entities is not None:
        obj["ner"] = structure_to_obj(rec.entities)
    if rec.tree is not None:
        obj["con"] = structure_to_obj(rec.tree)
    if rec.dep is not None:
        obj["dep"] = structure_to_obj(rec.dep)
    return obj


def record_from_obj(obj: dict) -> CorpusRecord:
    rec = CorpusRecord(Sentence.of(obj["tokens"]), obj.get("id", ""))
    if "pos" in obj:
        rec.pos = structure_from_obj(obj["pos"])
    if "ner" in obj:
        rec.entities = structure_from_obj(obj["ner"])
    if "con" in obj:
        rec.tree = structure_from_obj(obj["con"])
    if "dep" in obj:
        rec.dep = structure_from_obj(obj["dep"])
    return rec


def write_jsonl(records: Iterable[CorpusRecord]) -> str:
    lines = [json.dumps(record_to_obj(r), sort_keys=True, separators=(",", ":")) for r in records]
    return "".join(line + "\n" for line in lines)


def read_jsonl(text: str, validate: bool = True) -> list[CorpusRecord]:
    records = []
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rec = record_from_obj(obj)
        except (json.JSONDecodeError, KeyError, StructureError, TypeError) as exc:
            raise ReadError(line_no, f"bad record: {exc}") from None
        if validate:
            problems = rec.validate()
            if problems:
                raise ReadError(line_no, problems[0])
        records.append(rec)
    return records


def load_sample_corpus() -> list[CorpusRecord]:
    """The bundled synthetic corpus used by tests and demos."""
    from importlib import resources

    text = resources.files("parseq").joinpath("data/sample_corpus.jsonl").read_text("utf-8")
    return read_jsonl(text)
