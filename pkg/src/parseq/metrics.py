"""Task metrics and stratified reporting.

All metrics are percentages in [0, 100], computed by micro counting over the
whole corpus, so they are invariant to sentence order.  Punctuation is never
excluded.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core import TOP, ConNode, ConTree, DepTree, EntitySet, PosSequence, Sentence


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float


def _f1(tp: int, pred: int, gold: int) -> PRF:
    p = 100.0 * tp / pred if pred else 0.0
    r = 100.0 * tp / gold if gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return PRF(p, r, f)


def _require_aligned(gold: Sequence, pred: Sequence):
    if len(gold) != len(pred):
        raise ValueError(f"gold has {len(gold)} records, predictions have {len(pred)}")
    if not gold:
        raise ValueError("empty corpus")


def pos_accuracy(gold: Sequence[PosSequence], pred: Sequence[PosSequence]) -> float:
    _require_aligned(gold, pred)
    correct = total = 0
    for g, p in zip(gold, pred):
        if len(g.tags) != len(p.tags):
            raise ValueError("tag sequences of unequal length")
        total += len(g.tags)
        correct += sum(a == b for a, b in zip(g.tags, p.tags))
    return 100.0 * correct / total


def ner_span_f1(gold: Sequence[EntitySet], pred: Sequence[EntitySet]) -> PRF:
    """Micro F1 over exact (start, end, label) matches."""
    _require_aligned(gold, pred)
    tp = ngold = npred = 0
    for g, p in zip(gold, pred):
        gset = set(g.entities)
        ngold += len(g.entities)
        npred += len(p.entities)
        tp += sum(1 for e in set(p.entities) if e in gset)
    return _f1(tp, npred, ngold)


def brackets(tree: ConTree) -> Counter:
    """Labeled (label, start, end) spans below TOP, with multiplicity."""
    out: Counter = Counter()

    def walk(node: ConNode):
        terms = node.terminals()
        if node.label != TOP and terms:
            out[(node.label, min(terms), max(terms))] += 1
        for c in node.children:
            if isinstance(c, ConNode):
                walk(c)

    walk(tree.root)
    return out


def bracket_f1(gold: Sequence[ConTree], pred: Sequence[ConTree]) -> PRF:
    """Labeled bracket F1: multiset intersection of spans, TOP excluded."""
    _require_aligned(gold, pred)
    tp = ngold = npred = 0
    for g, p in zip(gold, pred):
        gb, pb = brackets(g), brackets(p)
        ngold += sum(gb.values())
        npred += sum(pb.values())
        tp += sum((gb & pb).values())
    return _f1(tp, npred, ngold)


def uas_las(gold: Sequence[DepTree], pred: Sequence[DepTree]) -> tuple[float, float]:
    _require_aligned(gold, pred)
    total = heads_ok = both_ok = 0
    for g, p in zip(gold, pred):
        if g.n != p.n:
            raise ValueError("trees of unequal length")
        total += g.n
        for gh, gr, ph, pr in zip(g.heads, g.rels, p.heads, p.rels):
            if gh == ph:
                heads_ok += 1
                if gr == pr:
                    both_ok += 1
    return 100.0 * heads_ok / total, 100.0 * both_ok / total


# ---------------------------------------------------------------------------
# Stratified reporting


@dataclass(frozen=True)
class Stratum:
    bucket: str
    count: int
    metrics: dict[str, float]


@dataclass(frozen=True)
class EvalReport:
    task: str
    factor: str | None
    overall: dict[str, float]
    strata: tuple[Stratum, ...]

    def to_json(self) -> str:
        obj = {
            "task": self.task,
            "factor": self.factor,
            "overall": self.overall,
            "strata": [
                {"bucket": s.bucket, "count": s.count, "metrics": s.metrics} for s in self.strata
            ],
        }
        return json.dumps(obj, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"task: {self.task}"]
        width = max((len(s.bucket) for s in self.strata), default=7)
        width = max(width, len("overall"))
        names = list(self.overall)
        header = "bucket".ljust(width) + "  count  " + "  ".join(n.rjust(9) for n in names)
        lines.append(header)
        rows = list(self.strata) + [Stratum("overall", sum(s.count for s in self.strata), self.overall)]
        if not self.strata:
            rows = [Stratum("overall", 0, self.overall)]
        for s in rows:
            vals = "  ".join(f"{s.metrics.get(n, 0.0):9.2f}" for n in names)
            lines.append(f"{s.bucket.ljust(width)}  {s.count:5d}  {vals}")
        return "\n".join(lines)


def task_metrics(task: str, gold: Sequence, pred: Sequence) -> dict[str, float]:
    if task == "pos":
        return {"accuracy": pos_accuracy(gold, pred)}
    if task == "ner":
        p, r, f = ner_span_f1(gold, pred)
        return {"precision": p, "recall": r, "f1": f}
    if task == "con":
        p, r, f = bracket_f1(gold, pred)
        return {"precision": p, "recall": r, "f1": f}
    if task == "dep":
        uas, las = uas_las(gold, pred)
        return {"uas": uas, "las": las}
    raise ValueError(f"unknown task {task!r}")


@dataclass
class FactorConfig:
    """Auxiliary data for stratification factors.

    ``vocabulary`` feeds the out-of-vocabulary rate for tagging, ``entities``
    the unseen-entity rate; ``boundaries`` are inclusive upper bucket edges.
    """

    vocabulary: frozenset[str] = frozenset()
    entities: frozenset[tuple[str, ...]] = frozenset()
    boundaries: tuple[float, ...] | None = None


def _rate_bucket(rate: float, edges: tuple[float, ...]) -> str:
    lo = 0.0
    for hi in edges:
        if rate <= hi:
            return f"{lo:g}-{hi:g}%" if lo else f"<={hi:g}%"
        lo = hi
    return f">{edges[-1]:g}%"


def _rate_bucket_order(edges: tuple[float, ...]) -> list[str]:
    names = []
    lo = 0.0
    for hi in edges:
        names.append(f"{lo:g}-{hi:g}%" if lo else f"<={hi:g}%")
        lo = hi
    names.append(f">{edges[-1]:g}%")
    return names


def _length_bucket(n: int, edges: tuple[float, ...]) -> str:
    for hi in edges:
        if n <= hi:
            return f"<={int(hi)}"
    return f">{int(edges[-1])}"


def _length_bucket_order(edges: tuple[float, ...]) -> list[str]:
    return [f"<={int(hi)}" for hi in edges] + [f">{int(edges[-1])}"]


DEFAULT_EDGES = {
    "oov-rate": (0.0, 10.0, 30.0, 50.0),
    "unseen-entities": (0.0, 50.0),
    "length": (10.0, 20.0, 30.0, 40.0),
    "arc-distance": (1.0, 2.0, 3.0, 6.0),
}

FACTORS = {
    "pos": "oov-rate",
    "ner": "unseen-entities",
    "con": "length",
    "dep": "arc-distance",
}


def stratify(
    task: str,
    sentences: Sequence[Sentence],
    gold: Sequence,
    pred: Sequence,
    factor: str | None = None,
    config: FactorConfig | None = None,
) -> EvalReport:
    """Recompute the task metric per factor bucket.

    For tagging, spans, and constituents the scored unit is the sentence;
    for dependencies it is the single arc, bucketed by head-dependent
    distance (root arcs form their own bucket).
    """
    factor = factor or FACTORS[task]
    config = config or FactorConfig()
    edges = config.boundaries or DEFAULT_EDGES[factor]
    overall = task_metrics(task, gold, pred)
    _require_aligned(gold, pred)
    if len(sentences) != len(gold):
        raise ValueError("sentence count does not match corpus")

    buckets: dict[str, list[int]] = {}
    if factor == "arc-distance":
        if task != "dep":
            raise ValueError("arc-distance applies to dependency corpora only")
        counts: dict[str, list[int]] = {}
        for g, p in zip(gold, pred):
            for i in range(1, g.n + 1):
                gh, ph = g.heads[i - 1], p.heads[i - 1]
                bucket = "root" if gh == 0 else _length_bucket(abs(gh - i), edges)
                tot = counts.setdefault(bucket, [0, 0, 0])
                tot[0] += 1
                if gh == ph:
                    tot[1] += 1
                    if g.rels[i - 1] == p.rels[i - 1]:
                        tot[2] += 1
        order = _length_bucket_order(edges) + ["root"]
        strata = tuple(
            Stratum(b, counts[b][0], {
                "uas": 100.0 * counts[b][1] / counts[b][0],
                "las": 100.0 * counts[b][2] / counts[b][0],
            })
            for b in order
            if b in counts
        )
        return EvalReport(task, factor, overall, strata)

    for idx, sent in enumerate(sentences):
        if factor == "oov-rate":
            oov = sum(1 for t in sent.tokens if t not in config.vocabulary)
            bucket = _rate_bucket(100.0 * oov / sent.n, edges)
        elif factor == "unseen-entities":
            ents = gold[idx].entities
            if not ents:
                bucket = "no-entities"
            else:
                unseen = sum(
                    1
                    for e in ents
                    if tuple(sent.tokens[e.start - 1 : e.end]) not in config.entities
                )
                bucket = _rate_bucket(100.0 * unseen / len(ents), edges)
        elif factor == "length":
            bucket = _length_bucket(sent.n, edges)
        else:
            raise ValueError(f"unknown factor {factor!r}")
        buckets.setdefault(bucket, []).append(idx)

    if factor == "length":
        order = _length_bucket_order(edges)
    else:
        order = _rate_bucket_order(edges) + ["no-entities"]
    strata = []
    for bucket in order:
        if bucket not in buckets:
            continue
        idxs = buckets[bucket]
        metrics = task_metrics(task, [gold[i] for i in idxs], [pred[i] for i in idxs])
        strata.append(Stratum(bucket, len(idxs), metrics))
    return EvalReport(task, factor, overall, tuple(strata))
