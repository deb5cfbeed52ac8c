"""Task metrics and stratified reporting.

Predictions here are gold structures pushed through a noisy channel: a
fraction of tags/arcs is corrupted, then scored overall and per factor
bucket (sentence length, arc distance, out-of-vocabulary rate).
"""
import random

from parseq import DepTree, FactorConfig, PosSequence, stratify
from parseq.io import load_sample_corpus
from parseq.profiles import description_dict

rng = random.Random(1)
corpus = load_sample_corpus()
sents = [r.sentence for r in corpus]

# tagging with 10% label noise, stratified by OOV rate against a half vocabulary
dp = description_dict("pos")
gold_pos = [r.pos for r in corpus]
pred_pos = [
    PosSequence.of([t if rng.random() < 0.9 else rng.choice(dp.labels) for t in g.tags])
    for g in gold_pos
]
vocab = frozenset(t for s in sents[: len(sents) // 2] for t in s.tokens)
report = stratify("pos", sents, gold_pos, pred_pos, "oov-rate", FactorConfig(vocabulary=vocab))
print(report.to_text())

# dependencies with 15% head noise, stratified by head-dependent distance
dd = description_dict("dep")
gold_dep = [r.dep for r in corpus]
pred_dep = []
for g in gold_dep:
    heads = list(g.heads)
    for i in range(g.n):
        if rng.random() < 0.15:
            heads[i] = rng.choice([h for h in range(0, g.n + 1) if h != i + 1])
    pred_dep.append(DepTree.of(heads, g.rels))
report = stratify("dep", sents, gold_dep, pred_dep)
print()
print(report.to_text())
