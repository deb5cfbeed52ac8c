"""Decoding through the external-scorer line protocol.

A scorer is any child process that answers one JSON request per line with
one JSON score vector per line.  This demo trains the bundled bigram
adapter (frontend/) on linearized corpus sequences and lets it drive
constrained entity decoding; if the adapter is not built it falls back to
an inline echo scorer.
"""
import pathlib
import sys
import tempfile

from parseq import SchemaConfig, automaton, decode, delinearize, external_scorer, linearize
from parseq.io import load_sample_corpus

ECHO = "import json,sys\nfor line in sys.stdin:\n    req=json.loads(line)\n    print(json.dumps({'scores':[0.0]*len(req['candidates'])}),flush=True)\n"

corpus = load_sample_corpus()
config = SchemaConfig("ner", "pt")

adapter = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "dist" / "serve.js"
if adapter.exists():
    train = tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False)
    for rec in corpus:
        train.write(linearize(config, rec.sentence, rec.entities).text() + "\n")
    train.close()
    command = ["node", str(adapter), "--backend", "bigram", "--train", train.name]
    print(f"scorer: bigram adapter ({adapter})")
else:
    command = [sys.executable, "-c", ECHO]
    print("scorer: inline echo process (build frontend/ for the bigram adapter)")

with external_scorer(command) as scorer:
    for rec in corpus[:8]:
        out = decode(rec.sentence, automaton(config, rec.sentence), scorer)
        entities = delinearize(config, rec.sentence, out)
        print(f"\n  {rec.sentence.text()}")
        print(f"  -> {' '.join(out.body)}")
        print(f"  -> {[(e.start, e.end, e.label) for e in entities.entities]}")
