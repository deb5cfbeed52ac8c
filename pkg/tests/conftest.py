import pytest

from parseq.core import ConNode, ConTree, DepTree, EntitySet, PosSequence, Sentence, TOP


@pytest.fixture(scope="session")
def orlando_sentence() -> Sentence:
    return Sentence.parse("My friend who lives in Orlando bought me a gift from Disney World")


@pytest.fixture(scope="session")
def orlando_tags() -> PosSequence:
    return PosSequence.of("PRP$ NN WP VBZ IN NNP VBD PRP DT NN IN NNP NNP".split())


@pytest.fixture(scope="session")
def orlando_entities() -> EntitySet:
    return EntitySet.of([(6, 6, "NORP"), (12, 13, "ORG")])


@pytest.fixture(scope="session")
def orlando_tree() -> ConTree:
    def N(label, *kids):
        return ConNode(label, tuple(kids))

    return ConTree(
        N(
            TOP,
            N(
                "S",
                N(
                    "NP",
                    N("NP", 1, 2),
                    N("SBAR", N("WHNP", 3), N("S", N("VP", 4, N("PP", 5, N("NP", 6))))),
                ),
                N("VP", 7, N("NP", 8), N("NP", 9, 10, N("PP", 11, N("NP", 12, 13)))),
            ),
        )
    )


@pytest.fixture(scope="session")
def orlando_dep() -> DepTree:
    heads = [2, 7, 4, 2, 6, 4, 0, 7, 10, 7, 13, 13, 10]
    rels = "poss nsubj nsubj relcl case obl root iobj det obj case compound nmod".split()
    return DepTree.of(heads, rels)
