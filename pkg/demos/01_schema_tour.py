"""Tour of the three output schemas across all four tasks.

One sentence, annotated for tagging, entities, constituency, and
dependencies, rendered as a label sequence (LS), a label-with-text
interleaving (LT), and a natural-language prompt (PT).
"""
from parseq import ConNode, ConTree, DepTree, EntitySet, PosSequence, Sentence, SchemaConfig, linearize

sent = Sentence.parse("My friend who lives in Orlando bought me a gift from Disney World")

tags = PosSequence.of("PRP$ NN WP VBZ IN NNP VBD PRP DT NN IN NNP NNP".split())
entities = EntitySet.of([(6, 6, "NORP"), (12, 13, "ORG")])


def node(label, *kids):
    return ConNode(label, tuple(kids))


tree = ConTree(
    node(
        "TOP",
        node(
            "S",
            node(
                "NP",
                node("NP", 1, 2),
                node("SBAR", node("WHNP", 3), node("S", node("VP", 4, node("PP", 5, node("NP", 6))))),
            ),
            node("VP", 7, node("NP", 8), node("NP", 9, 10, node("PP", 11, node("NP", 12, 13)))),
        ),
    )
)

dep = DepTree.of(
    [2, 7, 4, 2, 6, 4, 0, 7, 10, 7, 13, 13, 10],
    "poss nsubj nsubj relcl case obl root iobj det obj case compound nmod".split(),
)

golds = {"pos": tags, "ner": entities, "con": tree, "dep": dep}

print(f"sentence: {sent.text()}\n")
for task in ("pos", "ner", "con", "dep"):
    print(f"== {task.upper()} ==")
    for mode in ("ls", "lt", "pt"):
        out = linearize(SchemaConfig(task, mode, variant="paper-table-1"), sent, golds[task])
        print(f"  {mode.upper():3} {' '.join(out.body)}")
    print()
