import random

import pytest

from parseq.core import ConNode, ConTree, DepTree, EntitySet, PosSequence, Sentence, TOP
from parseq.gen import (
    random_con_tree,
    random_entities,
    random_pos,
    random_projective_dep,
    random_sentence,
)
from parseq.metrics import (
    FactorConfig,
    bracket_f1,
    brackets,
    ner_span_f1,
    pos_accuracy,
    stratify,
    uas_las,
)
from parseq.profiles import description_dict

DP = description_dict("pos")
DN = description_dict("ner")
DC = description_dict("con")
DD = description_dict("dep")


from oracles import oracle_con, oracle_dep, oracle_ner, oracle_pos


class TestHandExamples:
    def test_pos_identical_and_disjoint(self):
        a = [PosSequence.of(["A", "B"])]
        b = [PosSequence.of(["C", "D"])]
        assert pos_accuracy(a, a) == 100.0
        assert pos_accuracy(a, b) == 0.0

    def test_pos_three_of_four(self):
        g = [PosSequence.of(["A", "B", "C", "D"])]
        p = [PosSequence.of(["A", "B", "C", "X"])]
        assert pos_accuracy(g, p) == 75.0

    def test_ner_half_recall(self):
        g = [EntitySet.of([(1, 2, "ORG"), (4, 4, "PER")])]
        p = [EntitySet.of([(1, 2, "ORG")])]
        prec, rec, f = ner_span_f1(g, p)
        assert prec == 100.0 and rec == 50.0
        assert f == pytest.approx(66.6667, abs=1e-3)

    def test_ner_type_mismatch_counts_both_ways(self):
        g = [EntitySet.of([(1, 2, "ORG")])]
        p = [EntitySet.of([(1, 2, "PER")])]
        prec, rec, f = ner_span_f1(g, p)
        assert (prec, rec, f) == (0.0, 0.0, 0.0)

    def test_bracket_excludes_top(self):
        t = ConTree(ConNode(TOP, (ConNode("S", (1, 2)),)))
        assert set(brackets(t)) == {("S", 1, 2)}

    def test_bracket_unary_multiplicity(self):
        t = ConTree(ConNode(TOP, (ConNode("NP", (ConNode("NP", (1, 2)),)),)))
        assert brackets(t)[("NP", 1, 2)] == 2

    def test_bracket_empty_pred_zero(self, orlando_tree):
        flat = ConTree(ConNode(TOP, (ConNode("X", tuple(range(1, 14))),)))
        prec, rec, f = bracket_f1([orlando_tree], [flat])
        assert f < 15.0

    def test_uas_las_one_wrong_relation(self):
        g = DepTree.of([2, 0, 2, 3, 3], ["a", "root", "b", "c", "d"])
        p = DepTree.of([2, 0, 2, 3, 3], ["a", "root", "b", "c", "X"])
        assert uas_las([g], [p]) == (100.0, 80.0)

    def test_empty_corpus_errors(self):
        with pytest.raises(ValueError):
            uas_las([], [])


class TestAgainstOracles:
    def test_randomized_corpora(self):
        rng = random.Random(55)
        for _ in range(20):
            size = rng.randint(1, 12)
            sents = [random_sentence(rng, rng.randint(1, 8)) for _ in range(size)]
            gp = [random_pos(rng, s.n, DP.labels) for s in sents]
            pp = [
                PosSequence.of(
                    [t if rng.random() < 0.7 else rng.choice(DP.labels) for t in g.tags]
                )
                for g in gp
            ]
            assert pos_accuracy(gp, pp) == pytest.approx(oracle_pos(gp, pp), abs=1e-9)

            gn = [random_entities(rng, s.n, DN.labels) for s in sents]
            pn = [random_entities(rng, s.n, DN.labels) for s in sents]
            assert ner_span_f1(gn, pn) == pytest.approx(oracle_ner(gn, pn), abs=1e-9)

            gc = [random_con_tree(rng, s.n, DC.labels) for s in sents]
            pc = [random_con_tree(rng, s.n, DC.labels) for s in sents]
            assert bracket_f1(gc, pc) == pytest.approx(oracle_con(gc, pc), abs=1e-9)

            gd = [random_projective_dep(rng, s.n, DD.labels) for s in sents]
            pd = [random_projective_dep(rng, s.n, DD.labels) for s in sents]
            assert uas_las(gd, pd) == pytest.approx(oracle_dep(gd, pd), abs=1e-9)

    def test_permutation_invariance(self):
        rng = random.Random(66)
        sents = [random_sentence(rng, rng.randint(2, 6)) for _ in range(8)]
        gold = [random_projective_dep(rng, s.n, DD.labels) for s in sents]
        pred = [random_projective_dep(rng, s.n, DD.labels) for s in sents]
        base = uas_las(gold, pred)
        order = list(range(8))
        rng.shuffle(order)
        assert uas_las([gold[i] for i in order], [pred[i] for i in order]) == base


class TestStratify:
    def test_single_bucket_equals_overall(self):
        rng = random.Random(5)
        sents = [random_sentence(rng, rng.randint(2, 6)) for _ in range(10)]
        gold = [random_pos(rng, s.n, DP.labels) for s in sents]
        pred = [random_pos(rng, s.n, DP.labels) for s in sents]
        report = stratify(
            "pos", sents, gold, pred, "length", FactorConfig(boundaries=(100.0,))
        )
        assert len(report.strata) == 1
        assert report.strata[0].metrics == report.overall
        assert report.strata[0].count == 10

    def test_oov_all_in_vocabulary(self):
        rng = random.Random(6)
        sents = [random_sentence(rng, 4) for _ in range(5)]
        vocab = frozenset(t for s in sents for t in s.tokens)
        gold = [random_pos(rng, s.n, DP.labels) for s in sents]
        report = stratify("pos", sents, gold, gold, "oov-rate", FactorConfig(vocabulary=vocab))
        assert len(report.strata) == 1
        assert report.strata[0].bucket.startswith("<=0")

    def test_length_buckets_hand_checked(self):
        s1, s2 = Sentence.parse("a b"), Sentence.parse("c d e f g h i j k l m n")
        gold = [PosSequence.of(["X"] * 2), PosSequence.of(["X"] * 12)]
        report = stratify("pos", [s1, s2], gold, gold, "length")
        assert {st.bucket: st.count for st in report.strata} == {"<=10": 1, "<=20": 1}

    def test_counts_sum_to_corpus(self):
        rng = random.Random(7)
        sents = [random_sentence(rng, rng.randint(1, 9)) for _ in range(20)]
        gold = [random_entities(rng, s.n, DN.labels) for s in sents]
        report = stratify("ner", sents, gold, gold, "unseen-entities")
        assert sum(st.count for st in report.strata) == 20

    def test_report_serializes(self):
        rng = random.Random(8)
        sents = [random_sentence(rng, 4) for _ in range(4)]
        gold = [random_projective_dep(rng, 4, DD.labels) for _ in sents]
        report = stratify("dep", sents, gold, gold)
        assert "arc-distance" in report.to_json()
        assert "overall" in report.to_text()
