"""Seeded random generators for sentences and valid structures.

Sentences use per-sentence-distinct tokens.  The prompt schemas anchor spans
and operands by surface string, so repeated tokens can make two different
structures linearize identically; keeping tokens distinct makes every
generated structure exactly recoverable, mirroring corpora where such
collisions do not occur.
"""
from __future__ import annotations

import random
from typing import Sequence

from .core import ConNode, ConTree, DepTree, EntitySet, PosSequence, Sentence, TOP
from .io import CorpusRecord
from .profiles import SENTENCE_WORD, description_dict

WORDS = """
able acre actor adobe agate agent alley amber anchor angle ankle anvil apron
arbor arrow aspen atlas attic auger autumn awning badge bagel baker balcony
bamboo banjo barge barley basil basin baton bazaar beacon beaker bellow bench
birch bishop bison blanket blossom bluff bobbin bonnet booth borough boulder
bow bramble brass brick bridge brook bucket bugle bulb bundle burlap buzzard
cabin cable cactus camel canal candle canoe canvas canyon carafe cargo carpet
cedar cellar chalk chapel chisel cider cinder circus citron clay cliff clover
cobble comet compass copper coral cork cornice cottage crane crater creek
crest crocus crumb crystal cupola current dagger dahlia dairy damsel dapple
deck delta denim depot derby dew dinghy dome donkey dory dove draft dune
easel eddy elder elk ember emery engine ferry fiddle fig finch fjord flagon
flask fleet flint foal fog forge fossil fountain fox freight frost gale
galley garnet gavel gazebo geyser ginger glacier glade goblet gorge granite
grape grove gull gutter hamlet harbor harp hatch hazel heath hedge heron
hinge hollow husk ibis icicle ingot inlet iris ivory jetty jigsaw juniper
kayak keel kiln kiosk kite knoll ladle lagoon lantern larch lark lathe lava
ledge lemon lichen lilac lily lime linen loft lotus lumber lyre magnet mango
mantle maple marble marsh mason mast meadow mesa mill minnow mint mole
morsel moss mulch mural myrtle napkin nectar nickel nook oasis ocean olive
onyx opal orchard osprey otter oven owl paddle pagoda palm pantry papyrus
parcel parlor pebble pecan pepper perch pier pine pitcher plank plaza plume
pond poplar porch prairie prism pulley pumice quarry quartz quill quilt
raft rattan ravine reed ridge rivet robin rudder rye saddle sage salmon
satchel scow sedge shale shoal shutter silo skiff slate sleet sloop smithy
snail sorrel spade spruce squall steeple stern stove swan tallow tarn teak
thicket tide tiller timber tonic trellis trout tulip tundra turret twine
urn valley vane vault velvet verge vessel vine wagon walnut weir wharf
wicker willow windlass wren yarrow zephyr
""".split()

assert SENTENCE_WORD not in WORDS


def random_sentence(rng: random.Random, n: int) -> Sentence:
    return Sentence.of(rng.sample(WORDS, n))


def random_pos(rng: random.Random, n: int, labels: Sequence[str]) -> PosSequence:
    return PosSequence.of(rng.choice(labels) for _ in range(n))


def random_entities(rng: random.Random, n: int, labels: Sequence[str]) -> EntitySet:
    spans = []
    i = 1
    while i <= n:
        if rng.random() < 0.35:
            length = min(rng.randint(1, 3), n - i + 1)
            spans.append((i, i + length - 1, rng.choice(labels)))
            i += length + 1
        else:
            i += 1
    return EntitySet.of(spans)


def random_con_tree(
    rng: random.Random,
    n: int,
    labels: Sequence[str],
    root_label: str = "S",
    max_depth: int = 5,
) -> ConTree:
    def grow(lo: int, hi: int, depth: int) -> ConNode:
        label = root_label if depth == 0 else rng.choice(labels)
        size = hi - lo + 1
        if size == 1 or depth >= max_depth:
            return ConNode(label, tuple(range(lo, hi + 1)))
        children: list = []
        i = lo
        while i <= hi:
            chunk = min(rng.randint(1, max(2, size // 2)), hi - i + 1)
            if rng.random() < 0.55 and chunk >= 1:
                children.append(grow(i, i + chunk - 1, depth + 1))
            else:
                children.extend(range(i, i + chunk))
            i += chunk
        if all(not isinstance(c, ConNode) for c in children) and rng.random() < 0.5 and size >= 2:
            # keep some internal structure
            mid = (lo + hi) // 2
            children = [grow(lo, mid, depth + 1), *range(mid + 1, hi + 1)]
        return ConNode(label, tuple(children))

    return ConTree(ConNode(TOP, (grow(1, n, 0),)))


def random_projective_dep(
    rng: random.Random, n: int, labels: Sequence[str], root_rel: str = "root"
) -> DepTree:
    heads = [0] * (n + 1)
    rels = [""] * (n + 1)
    non_root = [r for r in labels if r != root_rel] or list(labels)

    def grow(lo: int, hi: int, head: int):
        if lo > hi:
            return
        pivot = rng.randint(lo, hi)
        heads[pivot] = head
        rels[pivot] = root_rel if head == 0 else rng.choice(non_root)
        grow(lo, pivot - 1, pivot)
        grow(pivot + 1, hi, pivot)

    grow(1, n, 0)
    return DepTree.of(heads[1:], rels[1:])


def random_record(rng: random.Random, ident: str, n: int | None = None) -> CorpusRecord:
    """One sentence annotated for all four tasks at once."""
    pos_labels = description_dict("pos").labels
    ner_labels = description_dict("ner").labels
    con_labels = description_dict("con").labels
    dep_labels = description_dict("dep").labels
    n = n or rng.randint(1, 12)
    sent = random_sentence(rng, n)
    return CorpusRecord(
        sentence=sent,
        provenance=ident,
        pos=random_pos(rng, n, pos_labels),
        entities=random_entities(rng, n, ner_labels),
        tree=random_con_tree(rng, n, con_labels),
        dep=random_projective_dep(rng, n, dep_labels),
    )


def build_sample_corpus(seed: int = 20240, count: int = 240) -> list[CorpusRecord]:
    rng = random.Random(seed)
    return [random_record(rng, f"sample-{i:04d}") for i in range(count)]
