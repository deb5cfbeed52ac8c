import random

import pytest

from parseq.core import EOS, Entity, EntitySet, MalformedOutputError, OutputSequence, Sentence
from parseq.gen import random_entities, random_sentence
from parseq.ner import (
    NO_ENTITIES,
    bieos_tags,
    delinearize_ner,
    linearize_ner,
    ner_automaton,
    segment,
    spans_from_bieos,
)
from parseq.profiles import description_dict
from parseq.trie import TokenTrie

D = description_dict("ner")
D1 = description_dict("ner", "paper-table-1")


class TestBieos:
    def test_worked_example(self, orlando_sentence, orlando_entities):
        tags = bieos_tags(orlando_sentence, orlando_entities)
        assert tags == "O O O O O S-NORP O O O O O B-ORG E-ORG".split()

    def test_spans_roundtrip(self):
        tags = "B-ORG I-ORG E-ORG O S-PER".split()
        assert spans_from_bieos(tags) == [Entity(1, 3, "ORG"), Entity(5, 5, "PER")]

    def test_strict_rejects_dangling(self):
        with pytest.raises(MalformedOutputError):
            spans_from_bieos("O I-PER O".split())

    def test_repair_dangling_inside(self):
        spans = spans_from_bieos("O I-PER O".split(), strict=False)
        assert spans == [Entity(2, 2, "PER")]


class TestLinearize:
    def test_ls_worked_example(self, orlando_sentence, orlando_entities):
        out = linearize_ner(orlando_sentence, orlando_entities, "ls", D1)
        assert list(out.body) == "O O O O O S-NORP O O O O O B-ORG E-ORG".split()

    def test_lt_worked_example(self, orlando_sentence, orlando_entities):
        out = linearize_ner(orlando_sentence, orlando_entities, "lt", D1)
        expected = (
            "My friend who lives in <NORP> Orlando </NORP> bought me a gift from "
            "<ORG> Disney World </ORG>"
        ).split()
        assert list(out.body) == expected

    def test_pt_worked_example(self, orlando_sentence, orlando_entities):
        out = linearize_ner(orlando_sentence, orlando_entities, "pt", D1)
        expected = "`` Orlando '' is a geopolitical entity ; `` Disney World '' is an organization .".split()
        assert list(out.body) == expected

    def test_pt_no_entities_sentinel(self, orlando_sentence):
        out = linearize_ner(orlando_sentence, EntitySet.of(()), "pt", D1)
        assert out.body == NO_ENTITIES


class TestSegment:
    def test_multi_token_entity(self):
        trie = TokenTrie()
        trie.insert(["is", "an", "organization", ";"], "ORG")
        got = segment(trie, ["Disney", "World", "is", "an", "organization", ";"])
        assert got is not None
        entity, suffix, node = got
        assert entity == ["Disney", "World"]
        assert suffix == ["is", "an", "organization", ";"]
        assert node.terminal

    def test_no_suffix_started(self):
        trie = TokenTrie()
        trie.insert(["is", "a", "person", ";"], "PER")
        got = segment(trie, ["Orlando"])
        # only the all-entity split matches (at the root)
        entity, suffix, node = got
        assert entity == ["Orlando"] and suffix == [] and node is trie.root

    def test_smallest_split_point(self):
        trie = TokenTrie()
        trie.insert(["is", "a", "person", ";"], "PER")
        phrase = ["A", "is", "a", "person", "is", "a"]
        # oracle: enumerate split points, first whose remainder walks the trie
        expected = None
        for i in range(1, len(phrase) + 1):
            if trie.prefix_match(phrase[i:]) is not None:
                expected = (phrase[:i], phrase[i:])
                break
        entity, suffix, _ = segment(trie, phrase)
        assert (entity, suffix) == expected
        assert entity == ["A", "is", "a", "person"]

    def test_empty_phrase(self):
        assert segment(TokenTrie([(("x",), 1)]), []) is None


class TestDelinearize:
    @pytest.mark.parametrize("mode", ["ls", "lt", "pt"])
    def test_roundtrip(self, mode, orlando_sentence, orlando_entities):
        out = linearize_ner(orlando_sentence, orlando_entities, mode, D1)
        assert delinearize_ner(orlando_sentence, out, mode, D1) == orlando_entities

    def test_lt_lenient_drops_unclosed(self, orlando_sentence, orlando_entities):
        symbols = [s for s in linearize_ner(orlando_sentence, orlando_entities, "lt", D1).symbols]
        symbols.remove("</NORP>")
        got = delinearize_ner(orlando_sentence, OutputSequence.of(symbols), "lt", D1, lenient=True)
        assert got == EntitySet.of([(12, 13, "ORG")])

    def test_lt_strict_unclosed_errors(self, orlando_sentence, orlando_entities):
        symbols = [s for s in linearize_ner(orlando_sentence, orlando_entities, "lt", D1).symbols]
        symbols.remove("</NORP>")
        with pytest.raises(MalformedOutputError):
            delinearize_ner(orlando_sentence, OutputSequence.of(symbols), "lt", D1)

    def test_pt_span_resolved_by_occurrence(self):
        s = Sentence.parse("Large image of the Michael Jackson HIStory statue .")
        d = D.with_overrides(
            {"WORK_OF_ART": type(D.describe("ORG"))("art work", "an")}
        )
        seq = OutputSequence.of(
            "`` Michael Jackson '' is a person ; `` HIStory '' is an art work . EOS".split()
        )
        got = delinearize_ner(s, seq, "pt", d)
        assert got == EntitySet.of([(5, 6, "PERSON"), (7, 7, "WORK_OF_ART")])

    def test_pt_lenient_discards_unmatchable(self):
        s = Sentence.parse("a b c")
        seq = OutputSequence.of("`` zz '' is a person . EOS".split())
        assert delinearize_ner(s, seq, "pt", D, lenient=True) == EntitySet.of(())

    def test_pt_strict_unmatchable_errors(self):
        s = Sentence.parse("a b c")
        seq = OutputSequence.of("`` zz '' is a person . EOS".split())
        with pytest.raises(MalformedOutputError):
            delinearize_ner(s, seq, "pt", D)


class TestAutomaton:
    def test_lt_opened_tag_forces_close_or_token(self, orlando_sentence):
        auto = ner_automaton(orlando_sentence, "lt", D1)
        prefix = "My friend who lives in <NORP>".split()
        cands = auto.next_candidates(prefix)
        assert "Orlando" in cands
        assert "</NORP>" not in cands  # no empty spans
        auto.advance("Orlando")
        assert "</NORP>" in auto.candidates()

    def test_pt_occurrence_continuation_and_suffix(self, orlando_sentence):
        auto = ner_automaton(orlando_sentence, "pt", D1)
        cands = auto.next_candidates(["``", "Disney"])
        assert cands == {"World", "''"}

    def test_pt_after_final_period_eos(self, orlando_sentence, orlando_entities):
        out = linearize_ner(orlando_sentence, orlando_entities, "pt", D1)
        auto = ner_automaton(orlando_sentence, "pt", D1)
        assert auto.next_candidates(list(out.body)) == {EOS}

    def test_ls_grammar_blocks_dangling_inside(self):
        s = Sentence.parse("a b c d")
        auto = ner_automaton(s, "ls", D1)
        auto.advance("O")
        assert not any(c.startswith("I-") or c.startswith("E-") for c in auto.candidates())
        auto.advance("B-ORG")
        assert auto.candidates() == {"I-ORG", "E-ORG"}

    def test_ls_no_span_open_at_end(self):
        s = Sentence.parse("a b")
        auto = ner_automaton(s, "ls", D1)
        auto.advance("O")
        assert not any(c.startswith("B-") for c in auto.candidates())

    @pytest.mark.parametrize("mode", ["ls", "lt", "pt"])
    def test_exactness_on_gold(self, mode, orlando_sentence, orlando_entities):
        auto = ner_automaton(orlando_sentence, mode, D1)
        for sym in linearize_ner(orlando_sentence, orlando_entities, mode, D1).symbols:
            assert sym in auto.candidates()
            auto.advance(sym)
        assert auto.finished

    @pytest.mark.parametrize("mode", ["ls", "lt", "pt"])
    def test_closure_random_decodes(self, mode):
        rng = random.Random(23)
        for _ in range(100):
            s = random_sentence(rng, rng.randint(1, 7))
            auto = ner_automaton(s, mode, D)
            seq = []
            while not auto.finished:
                sym = rng.choice(sorted(auto.candidates()))
                auto.advance(sym)
                seq.append(sym)
            got = delinearize_ner(s, OutputSequence.of(seq), mode, D)
            for ent in got.entities:
                assert 1 <= ent.start <= ent.end <= s.n


class TestVerboseVariant:
    def test_roundtrip_and_exactness(self):
        rng = random.Random(5)
        for _ in range(40):
            s = random_sentence(rng, rng.randint(1, 7))
            ents = random_entities(rng, s.n, D.labels)
            out = linearize_ner(s, ents, "pt", D, verbose=True)
            assert delinearize_ner(s, out, "pt", D, verbose=True) == ents
            auto = ner_automaton(s, "pt", D, verbose=True)
            for sym in out.symbols:
                assert sym in auto.candidates()
                auto.advance(sym)

    def test_every_token_described(self):
        s = Sentence.parse("a b")
        out = linearize_ner(s, EntitySet.of(()), "pt", D, verbose=True)
        assert list(out.body) == "`` a '' isn't an entity ; `` b '' isn't an entity .".split()
