"""Batch command line: linearize, delinearize, decode, and eval over JSONL
corpora.

Every run is reproducible: the same config and seed produce byte-identical
outputs.  Strict errors are reported as JSON objects on stderr and drive a
non-zero exit code; per-record processing continues so one bad record does
not hide the rest.
"""
from __future__ import annotations

import argparse
import json
import sys

from .core import MalformedOutputError, OutputSequence, structure_from_obj, structure_to_obj
from .decode import (
    DecodeConfig,
    DecodeError,
    OracleScorer,
    RandomScorer,
    Scorer,
    UniformScorer,
    external_scorer,
    decode,
)
from .io import CorpusRecord, load_sample_corpus, read_jsonl
from .metrics import FactorConfig, stratify, task_metrics
from .schemas import SchemaConfig, automaton, delinearize, linearize


def _read_records(path: str) -> list[CorpusRecord]:
    if path == "sample":
        return load_sample_corpus()
    with open(path, encoding="utf-8") as fh:
        return read_jsonl(fh.read())


def _emit_error(record: str, reason: str):
    print(json.dumps({"record": record, "error": reason}), file=sys.stderr)


def _out_stream(path: str | None):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _schema_config(args) -> SchemaConfig:
    return SchemaConfig(args.task, args.schema, args.variant, profile=args.profile)


def _load_kv_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or (line.startswith("#") and "=" not in line):
                continue
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def cmd_linearize(args) -> int:
    config = _schema_config(args)
    errors = 0
    with _out_stream(args.output) as out:
        for rec in _read_records(args.input):
            if not rec.has(args.task):
                _emit_error(rec.provenance, f"no {args.task} annotation")
                errors += 1
                continue
            try:
                seq = linearize(config, rec.sentence, rec.gold(args.task))
            except (ValueError, KeyError) as exc:
                _emit_error(rec.provenance, str(exc))
                errors += 1
                continue
            print(seq.text(), file=out)
    return 1 if errors else 0


def cmd_delinearize(args) -> int:
    config = _schema_config(args)
    records = _read_records(args.input)
    with open(args.sequences, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if len(lines) != len(records):
        _emit_error("*", f"{len(lines)} sequences for {len(records)} records")
        return 1
    errors = 0
    with _out_stream(args.output) as out:
        for rec, line in zip(records, lines):
            seq = OutputSequence.of(line.split())
            try:
                structure = delinearize(config, rec.sentence, seq, lenient=args.lenient)
            except MalformedOutputError as exc:
                _emit_error(rec.provenance, str(exc))
                errors += 1
                continue
            print(json.dumps(structure_to_obj(structure), sort_keys=True), file=out)
    return 1 if errors else 0


def _make_scorer(spec: str, rec_gold: OutputSequence | None, seed: int) -> Scorer:
    if spec == "oracle":
        if rec_gold is None:
            raise DecodeError("oracle scorer needs gold annotations")
        return OracleScorer(rec_gold)
    if spec == "random":
        return RandomScorer(seed)
    if spec == "uniform":
        return UniformScorer()
    if spec.startswith("external:"):
        raise DecodeError("external scorers are opened once, not per record")
    raise DecodeError(f"unknown scorer {spec!r}")


def cmd_decode(args) -> int:
    config = _schema_config(args)
    decode_config = DecodeConfig(
        constrained=not args.unconstrained,
        strategy=args.strategy,
        seed=args.seed,
        beam_width=args.beam_width,
        max_len=args.max_len,
    )
    records = _read_records(args.input)
    shared_scorer = None
    if args.scorer.startswith("external:"):
        shared_scorer = external_scorer(args.scorer.partition(":")[2])
    strict_failures = 0
    decoded = 0
    try:
        with _out_stream(args.output) as out:
            for i, rec in enumerate(records):
                auto = automaton(config, rec.sentence)
                if auto is None:
                    _emit_error(rec.provenance, "no constrained automaton for this task")
                    return 2
                if shared_scorer is not None:
                    scorer = shared_scorer
                else:
                    gold = None
                    if args.scorer == "oracle":
                        gold = linearize(config, rec.sentence, rec.gold(args.task))
                    scorer = _make_scorer(args.scorer, gold, args.seed + i)
                seq = decode(rec.sentence, auto, scorer, decode_config)
                decoded += 1
                result = {"record": rec.provenance, "symbols": list(seq.symbols)}
                try:
                    structure = delinearize(config, rec.sentence, seq)
                    result["structure"] = structure_to_obj(structure)
                except MalformedOutputError as exc:
                    strict_failures += 1
                    result["error"] = str(exc)
                    if args.lenient:
                        repaired = delinearize(config, rec.sentence, seq, lenient=True)
                        result["structure"] = structure_to_obj(repaired)
                print(json.dumps(result, sort_keys=True), file=out)
    finally:
        if shared_scorer is not None:
            shared_scorer.close()
    summary = {"decoded": decoded, "strict_failures": strict_failures}
    print(json.dumps(summary), file=sys.stderr)
    return 1 if strict_failures else 0


def cmd_eval(args) -> int:
    records = _read_records(args.gold)
    sentences = [r.sentence for r in records]
    gold = [r.gold(args.task) for r in records]
    # predictions: bare structure objects or decode output carrying "structure"
    with open(args.pred, encoding="utf-8") as fh:
        pred = []
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            pred.append(structure_from_obj(obj.get("structure", obj)))
    if len(pred) != len(gold):
        _emit_error("*", f"{len(pred)} predictions for {len(gold)} gold records")
        return 1
    if args.stratify:
        config = FactorConfig()
        if args.factor_config:
            raw = json.loads(open(args.factor_config, encoding="utf-8").read())
            config = FactorConfig(
                vocabulary=frozenset(raw.get("vocabulary", ())),
                entities=frozenset(tuple(e) for e in raw.get("entities", ())),
                boundaries=tuple(raw["boundaries"]) if "boundaries" in raw else None,
            )
        report = stratify(args.task, sentences, gold, pred, args.stratify, config)
        print(report.to_json())
        print(report.to_text(), file=sys.stderr)
    else:
        print(json.dumps({"task": args.task, "metrics": task_metrics(args.task, gold, pred)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parseq",
        description="Linearize linguistic structures into text schemas and back.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schema=True):
        p.add_argument("--task", required=True, choices=["pos", "ner", "con", "dep"])
        if schema:
            p.add_argument("--schema", required=True, choices=["ls", "lt", "pt"])
            p.add_argument(
                "--variant",
                default="default",
                choices=["default", "paper-table-1", "dec-lex", "inc-vrb"],
            )
            p.add_argument("--profile", default=None, help="dictionary profile override")
        p.add_argument("--config", default=None, help="key/value file of defaults for these flags")

    p = sub.add_parser("linearize", help="gold structures to schema sequences")
    common(p)
    p.add_argument("--input", required=True, help="JSONL corpus ('sample' for the bundled one)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("delinearize", help="schema sequences back to structures")
    common(p)
    p.add_argument("--input", required=True, help="JSONL corpus supplying the sentences")
    p.add_argument("--sequences", required=True, help="one space-joined sequence per line")
    p.add_argument("--output", default=None)
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=cmd_delinearize)

    p = sub.add_parser("decode", help="generate sequences with a scorer")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--scorer", default="random", help="oracle | random | uniform | external:<cmd>")
    p.add_argument("--constrained", dest="unconstrained", action="store_false", default=False)
    p.add_argument("--unconstrained", dest="unconstrained", action="store_true")
    p.add_argument("--strategy", default="greedy", choices=["greedy", "sample", "beam"])
    p.add_argument("--beam-width", type=int, default=1)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lenient", action="store_true", help="also emit repaired structures")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("eval", help="score predictions against gold")
    common(p, schema=False)
    p.add_argument("--gold", required=True, help="JSONL corpus with gold annotations")
    p.add_argument("--pred", required=True, help="JSONL structures or decode output")
    p.add_argument("--stratify", default=None, help="oov-rate | unseen-entities | length | arc-distance")
    p.add_argument("--factor-config", default=None, help="JSON with vocabulary/entities/boundaries")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        defaults = _load_kv_config(args.config)
        for key, value in defaults.items():
            if hasattr(args, key) and parser.get_default(key) == getattr(args, key):
                current = getattr(args, key)
                if isinstance(current, bool):
                    value = value.lower() in ("1", "true", "yes")
                elif isinstance(current, int):
                    value = int(value)
                setattr(args, key, value)
    try:
        return args.func(args)
    except (DecodeError, OSError, ValueError) as exc:
        _emit_error("*", str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
