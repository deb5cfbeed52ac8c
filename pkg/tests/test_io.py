import pytest

from parseq.core import ConNode, ConTree, DepTree, EntitySet, TOP
from parseq.gen import build_sample_corpus
from parseq.io import (
    ReadError,
    load_sample_corpus,
    read_bracketed,
    read_conll_dep,
    read_conll_ner,
    read_jsonl,
    write_bracketed,
    write_conll_dep,
    write_jsonl,
)


class TestBracketed:
    def test_pos_level_removed(self):
        text = "( (S (NP (PRP It) ) (VP (VBZ works) ) ) )"
        [(sent, tree, tags)] = read_bracketed(text)
        assert sent.tokens == ("It", "works")
        assert tags.tags == ("PRP", "VBZ")
        assert tree == ConTree(
            ConNode(TOP, (ConNode("S", (ConNode("NP", (1,)), ConNode("VP", (2,)))),))
        )

    def test_empty_input(self):
        assert read_bracketed("") == []

    def test_unbalanced_brackets(self):
        with pytest.raises(ReadError):
            read_bracketed("(S (NP a)")

    def test_write_read_identity(self):
        for rec in build_sample_corpus()[:40]:
            text = write_bracketed(rec.sentence, rec.tree)
            [(sent, tree, _)] = read_bracketed(text)
            assert sent == rec.sentence
            assert tree == rec.tree

    def test_token_budget_drops(self, capsys):
        text = "( (S (NN a) (NN b) (NN c) ) )"
        assert read_bracketed(text, token_budget=2) == []
        assert "over budget" in capsys.readouterr().err


class TestConllNer:
    def test_bioes_spans(self):
        text = "Disney B-ORG\nWorld I-ORG\nrocks O\n"
        [(sent, ents)] = read_conll_ner(text)
        assert sent.tokens == ("Disney", "World", "rocks")
        assert ents == EntitySet.of([(1, 2, "ORG")])

    def test_o_only(self):
        [(_, ents)] = read_conll_ner("just O\nwords O\n")
        assert ents == EntitySet.of(())

    def test_dangling_inside_repaired(self):
        text = "a O\nb I-PER\nc I-PER\nd O\n"
        [(_, ents)] = read_conll_ner(text)
        assert ents == EntitySet.of([(2, 3, "PER")])

    def test_unknown_prefix(self):
        with pytest.raises(ReadError):
            read_conll_ner("a Q-ORG\n")

    def test_multiple_sentences(self):
        text = "a O\n\nb S-PER\n"
        got = read_conll_ner(text)
        assert len(got) == 2
        assert got[1][1] == EntitySet.of([(1, 1, "PER")])


class TestConllDep:
    def test_simple_projective(self):
        text = "1\tthe\t2\tdet\n2\tcat\t0\troot\n"
        [(sent, tree, projective)] = read_conll_dep(text)
        assert projective
        assert tree == DepTree.of([2, 0], ["det", "root"])

    def test_crossing_arcs_flagged(self):
        text = "1 a 3 x\n2 b 4 x\n3 c 0 root\n4 d 3 x\n"
        [(_, _, projective)] = read_conll_dep(text)
        assert not projective

    def test_drop_nonprojective(self):
        text = "1 a 3 x\n2 b 4 x\n3 c 0 root\n4 d 3 x\n\n1 e 0 root\n"
        got = read_conll_dep(text, drop_nonprojective=True)
        assert len(got) == 1

    def test_head_out_of_range(self):
        with pytest.raises(ReadError):
            read_conll_dep("1 a 5 x\n")

    def test_cycle_rejected(self):
        with pytest.raises(ReadError):
            read_conll_dep("1 a 2 x\n2 b 1 x\n")

    def test_ten_column_format(self):
        line1 = "1\tthe\t_\t_\tDT\t_\t2\tdet\t_\t_"
        line2 = "2\tcat\t_\t_\tNN\t_\t0\troot\t_\t_"
        [(sent, tree, _)] = read_conll_dep(line1 + "\n" + line2 + "\n")
        assert tree.rels == ("det", "root")

    def test_write_read(self):
        for rec in build_sample_corpus()[:20]:
            text = write_conll_dep(rec.sentence, rec.dep)
            [(sent, tree, projective)] = read_conll_dep(text)
            assert projective
            assert (sent, tree) == (rec.sentence, rec.dep)


class TestJsonl:
    def test_empty(self):
        assert read_jsonl("") == []
        assert write_jsonl([]) == ""

    def test_byte_stable_roundtrip(self):
        recs = build_sample_corpus()[:50]
        text = write_jsonl(recs)
        assert write_jsonl(read_jsonl(text)) == text

    def test_malformed_line_pinned(self):
        good = write_jsonl(build_sample_corpus()[:2]).splitlines()
        bad = "\n".join([good[0], "{not json", good[1]])
        with pytest.raises(ReadError, match="line 2"):
            read_jsonl(bad)

    def test_invalid_structure_rejected(self):
        rec = '{"id":"x","tokens":["a"],"ner":{"entities":[{"start":1,"end":5,"label":"Z"}]}}'
        with pytest.raises(ReadError):
            read_jsonl(rec)

    def test_sample_corpus_bundled(self):
        recs = load_sample_corpus()
        assert len(recs) >= 200
        assert all(not r.validate() for r in recs)
        assert all(r.has(t) for r in recs[:5] for t in ("pos", "ner", "con", "dep"))
