"""Strict round-trips and lenient repair.

Every linearization inverts exactly in strict mode.  Lenient mode patches
broken sequences instead: short tag sequences are padded, unpaired entity
tags dropped, unclosed constituents auto-closed, orphan dependents attached
to the root.
"""
from parseq import MalformedOutputError, OutputSequence, SchemaConfig, delinearize, linearize
from parseq.io import load_sample_corpus

corpus = load_sample_corpus()
rec = next(r for r in corpus if r.sentence.n >= 6)
print(f"sentence: {rec.sentence.text()}")

config = SchemaConfig("pos", "ls")
out = linearize(config, rec.sentence, rec.pos)
print(f"\ngold LS: {out.text()}")
assert delinearize(config, rec.sentence, out) == rec.pos
print("strict round-trip: exact")

# drop two tags: strict refuses, lenient pads with the default tag
broken = OutputSequence.of(list(out.symbols[:-3]) + ["EOS"])
print(f"\nbroken:  {broken.text()}")
try:
    delinearize(config, rec.sentence, broken)
except MalformedOutputError as err:
    print(f"strict:  {err}")
repaired = delinearize(config, rec.sentence, broken, lenient=True)
print(f"lenient: {' '.join(repaired.tags)}")

# the same idea for constituency: remove a closing transition
config = SchemaConfig("con", "ls")
out = linearize(config, rec.sentence, rec.tree)
symbols = list(out.symbols)
symbols.remove("RE")
broken = OutputSequence.of(symbols)
repaired = delinearize(config, rec.sentence, broken, lenient=True)
print(f"\ncon LS with one RE removed, lenient repair:\n  {repaired.pretty(rec.sentence)}")
