import json

import pytest

from parseq.cli import main
from parseq.gen import build_sample_corpus
from parseq.io import write_jsonl


@pytest.fixture(scope="module")
def small_corpus(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "small.jsonl"
    path.write_text(write_jsonl(build_sample_corpus(seed=99, count=12)))
    return path


def run(args):
    return main([str(a) for a in args])


class TestLinearizeDelinea:
    @pytest.mark.parametrize("task,schema", [("pos", "ls"), ("ner", "pt"), ("con", "pt"), ("dep", "lt")])
    def test_roundtrip_through_files(self, tmp_path, small_corpus, task, schema):
        seqs = tmp_path / "seqs.txt"
        structs = tmp_path / "structs.jsonl"
        assert run(["linearize", "--task", task, "--schema", schema, "--input", small_corpus, "--output", seqs]) == 0
        assert run([
            "delinearize", "--task", task, "--schema", schema,
            "--input", small_corpus, "--sequences", seqs, "--output", structs,
        ]) == 0
        got = [json.loads(line) for line in structs.read_text().splitlines()]
        assert len(got) == 12

    def test_corrupted_line_strict_fails(self, tmp_path, small_corpus):
        seqs = tmp_path / "seqs.txt"
        run(["linearize", "--task", "pos", "--schema", "ls", "--input", small_corpus, "--output", seqs])
        lines = seqs.read_text().splitlines()
        lines[0] = "BOGUS " + lines[0]
        seqs.write_text("\n".join(lines) + "\n")
        structs = tmp_path / "s.jsonl"
        code = run([
            "delinearize", "--task", "pos", "--schema", "ls",
            "--input", small_corpus, "--sequences", seqs, "--output", structs,
        ])
        assert code == 1

    def test_corrupted_line_lenient_repairs(self, tmp_path, small_corpus):
        seqs = tmp_path / "seqs.txt"
        run(["linearize", "--task", "pos", "--schema", "ls", "--input", small_corpus, "--output", seqs])
        lines = seqs.read_text().splitlines()
        lines[0] = " ".join(lines[0].split()[1:])  # drop one tag
        seqs.write_text("\n".join(lines) + "\n")
        structs = tmp_path / "s.jsonl"
        code = run([
            "delinearize", "--task", "pos", "--schema", "ls", "--lenient",
            "--input", small_corpus, "--sequences", seqs, "--output", structs,
        ])
        assert code == 0
        assert len(structs.read_text().splitlines()) == 12


class TestDecodeEval:
    def test_oracle_decode_scores_hundred(self, tmp_path, small_corpus, capsys):
        dec = tmp_path / "dec.jsonl"
        code = run([
            "decode", "--task", "ner", "--schema", "pt", "--input", small_corpus,
            "--scorer", "oracle", "--output", dec,
        ])
        assert code == 0
        code = run(["eval", "--task", "ner", "--gold", small_corpus, "--pred", dec])
        assert code == 0
        payload = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert payload["metrics"]["f1"] == 100.0

    def test_constrained_random_never_fails_strict(self, tmp_path, small_corpus, capsys):
        dec = tmp_path / "dec.jsonl"
        code = run([
            "decode", "--task", "dep", "--schema", "pt", "--input", small_corpus,
            "--scorer", "random", "--seed", 5, "--output", dec,
        ])
        assert code == 0
        summary = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert summary["strict_failures"] == 0

    def test_unconstrained_random_fails_strict(self, tmp_path, small_corpus, capsys):
        dec = tmp_path / "dec.jsonl"
        code = run([
            "decode", "--task", "dep", "--schema", "pt", "--input", small_corpus,
            "--scorer", "random", "--seed", 5, "--unconstrained", "--output", dec,
        ])
        assert code == 1
        summary = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert summary["strict_failures"] > 0

    def test_decode_deterministic(self, tmp_path, small_corpus):
        outs = []
        for name in ("a", "b"):
            dec = tmp_path / f"{name}.jsonl"
            run([
                "decode", "--task", "pos", "--schema", "pt", "--input", small_corpus,
                "--scorer", "random", "--seed", 3, "--strategy", "sample", "--output", dec,
            ])
            outs.append(dec.read_bytes())
        assert outs[0] == outs[1]

    def test_stratified_eval(self, tmp_path, small_corpus, capsys):
        seqs = tmp_path / "seqs.txt"
        structs = tmp_path / "structs.jsonl"
        run(["linearize", "--task", "con", "--schema", "lt", "--input", small_corpus, "--output", seqs])
        run([
            "delinearize", "--task", "con", "--schema", "lt",
            "--input", small_corpus, "--sequences", seqs, "--output", structs,
        ])
        code = run([
            "eval", "--task", "con", "--gold", small_corpus, "--pred", structs,
            "--stratify", "length",
        ])
        assert code == 0
        report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert sum(s["count"] for s in report["strata"]) == 12


class TestVariants:
    def test_table1_variant_linearizes(self, tmp_path, small_corpus):
        seqs = tmp_path / "seqs.txt"
        code = run([
            "linearize", "--task", "dep", "--schema", "pt", "--variant", "paper-table-1",
            "--input", small_corpus, "--output", seqs,
        ])
        assert code == 0

    def test_dec_lex_rejected_for_ner(self, small_corpus, capsys):
        code = run([
            "linearize", "--task", "ner", "--schema", "pt", "--variant", "dec-lex",
            "--input", small_corpus,
        ])
        assert code == 2

    def test_config_file_supplies_defaults(self, tmp_path, small_corpus):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("task = pos\nschema = lt\n")
        seqs = tmp_path / "seqs.txt"
        code = run([
            "linearize", "--task", "pos", "--schema", "lt", "--config", cfg,
            "--input", small_corpus, "--output", seqs,
        ])
        assert code == 0
