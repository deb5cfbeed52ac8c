import sys
import textwrap

import pytest

from parseq.core import EOS, OutputSequence, Sentence
from parseq.decode import (
    DecodeConfig,
    EmptyCandidates,
    OracleScorer,
    RandomScorer,
    ScorerProtocolError,
    UniformScorer,
    decode,
    external_scorer,
)
from parseq.gen import random_record
from parseq.schemas import SchemaConfig, automaton, delinearize, linearize

import random


def _record(seed=1, n=6):
    return random_record(random.Random(seed), f"r{seed}", n)


class TestOracleDecoding:
    @pytest.mark.parametrize("task,mode", [("pos", "ls"), ("pos", "pt"), ("ner", "lt"), ("dep", "pt")])
    def test_reproduces_gold(self, task, mode):
        rec = _record(seed=4)
        config = SchemaConfig(task, mode)
        gold_seq = linearize(config, rec.sentence, rec.gold(task))
        out = decode(rec.sentence, automaton(config, rec.sentence), OracleScorer(gold_seq))
        assert out == gold_seq
        assert delinearize(config, rec.sentence, out) == rec.gold(task)

    def test_missing_gold_symbol_raises(self):
        s = Sentence.parse("a b")
        config = SchemaConfig("pos", "lt")
        scorer = OracleScorer(OutputSequence.of(["WRONG", EOS]))
        with pytest.raises(ScorerProtocolError, match="step 0"):
            decode(s, automaton(config, s), scorer)


class TestDeterminism:
    def test_same_seed_same_output(self):
        rec = _record(seed=9)
        config = SchemaConfig("ner", "pt")
        outs = set()
        for _ in range(3):
            auto = automaton(config, rec.sentence)
            out = decode(rec.sentence, auto, RandomScorer(7), DecodeConfig(strategy="sample", seed=7))
            outs.add(out.symbols)
        assert len(outs) == 1

    def test_different_seed_varies(self):
        rec = _record(seed=9)
        config = SchemaConfig("ner", "pt")
        outs = set()
        for seed in range(6):
            auto = automaton(config, rec.sentence)
            out = decode(
                rec.sentence, auto, RandomScorer(seed), DecodeConfig(strategy="sample", seed=seed)
            )
            outs.add(out.symbols)
        assert len(outs) > 1


class TestBeam:
    def test_beam_one_equals_greedy(self):
        for seed in range(5):
            rec = _record(seed=seed, n=5)
            config = SchemaConfig("dep", "lt")
            greedy = decode(
                rec.sentence, automaton(config, rec.sentence), RandomScorer(3), DecodeConfig()
            )
            beam = decode(
                rec.sentence,
                automaton(config, rec.sentence),
                RandomScorer(3),
                DecodeConfig(strategy="beam", beam_width=1),
            )
            assert beam == greedy

    def test_wider_beam_strictly_delinearizes(self):
        rec = _record(seed=12, n=5)
        config = SchemaConfig("pos", "pt")
        out = decode(
            rec.sentence,
            automaton(config, rec.sentence),
            RandomScorer(5),
            DecodeConfig(strategy="beam", beam_width=3),
        )
        delinearize(config, rec.sentence, out)


class TestUnconstrained:
    def test_random_unconstrained_usually_fails_strict(self):
        failures = 0
        for seed in range(10):
            rec = _record(seed=seed, n=6)
            config = SchemaConfig("dep", "pt")
            auto = automaton(config, rec.sentence)
            out = decode(
                rec.sentence,
                auto,
                RandomScorer(seed),
                DecodeConfig(constrained=False, max_len=60),
            )
            try:
                delinearize(config, rec.sentence, out)
            except Exception:
                failures += 1
        assert failures > 0

    def test_budget_appends_eos(self):
        rec = _record(seed=2, n=4)
        config = SchemaConfig("pos", "pt")
        out = decode(
            rec.sentence,
            automaton(config, rec.sentence),
            UniformScorer(),
            DecodeConfig(constrained=False, max_len=10),
        )
        assert out.symbols[-1] == EOS
        assert len(out.symbols) == 11


ECHO_SCORER = textwrap.dedent(
    """
    import json, sys
    for line in sys.stdin:
        req = json.loads(line)
        print(json.dumps({"scores": [0.0] * len(req["candidates"])}), flush=True)
    """
)

BROKEN_SCORER = textwrap.dedent(
    """
    import json, sys
    for line in sys.stdin:
        req = json.loads(line)
        print(json.dumps({"scores": [0.0] * (len(req["candidates"]) - 1)}), flush=True)
    """
)


class TestExternalScorer:
    def test_echo_scorer_decodes(self):
        rec = _record(seed=3, n=5)
        config = SchemaConfig("ner", "pt")
        with external_scorer([sys.executable, "-c", ECHO_SCORER]) as scorer:
            out = decode(rec.sentence, automaton(config, rec.sentence), scorer)
            delinearize(config, rec.sentence, out)

    def test_uniform_ties_break_by_vocabulary_order(self):
        rec = _record(seed=3, n=5)
        config = SchemaConfig("pos", "ls")
        with external_scorer([sys.executable, "-c", ECHO_SCORER]) as scorer:
            ext = decode(rec.sentence, automaton(config, rec.sentence), scorer)
        local = decode(rec.sentence, automaton(config, rec.sentence), UniformScorer())
        assert ext == local

    def test_missing_candidate_is_protocol_error(self):
        rec = _record(seed=3, n=4)
        config = SchemaConfig("pos", "ls")
        with external_scorer([sys.executable, "-c", BROKEN_SCORER]) as scorer:
            with pytest.raises(ScorerProtocolError):
                decode(rec.sentence, automaton(config, rec.sentence), scorer)

    def test_dead_process_is_protocol_error(self):
        rec = _record(seed=3, n=4)
        config = SchemaConfig("pos", "ls")
        scorer = external_scorer([sys.executable, "-c", "pass"])
        with pytest.raises(ScorerProtocolError):
            decode(rec.sentence, automaton(config, rec.sentence), scorer)
        scorer.close()


class TestGuards:
    def test_stale_automaton_rejected(self):
        rec = _record(seed=5, n=3)
        config = SchemaConfig("pos", "ls")
        auto = automaton(config, rec.sentence)
        auto.advance(sorted(auto.candidates())[0])
        with pytest.raises(Exception, match="fresh"):
            decode(rec.sentence, auto, UniformScorer())

    def test_empty_candidates_surfaces(self):
        class BrokenAutomaton:
            consumed = ()

            def candidates(self):
                return set()

            def vocabulary(self):
                return (EOS,)

        s = Sentence.parse("a")
        with pytest.raises(EmptyCandidates):
            decode(s, BrokenAutomaton(), UniformScorer())
