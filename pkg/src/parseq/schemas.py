"""Uniform front door over the per-task codecs and automata.

A ``SchemaConfig`` names the task, the output mode, and the variant, and the
functions here dispatch to the right codec with the right dictionary.  The
``paper-table-1`` variant switches to the compact dictionary profile and
suppresses the dependency root attachment; ``dec-lex`` swaps glosses for raw
label strings (tagging and dependencies); ``inc-vrb`` describes every token
for entities and disables reference chaining for constituents.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automaton import SchemaAutomaton
from .core import DescriptionDict, OutputSequence, Sentence, Structure
from . import con, dep, ner, pos
from .profiles import DEFAULT_PROFILE, TABLE1_PROFILE, description_dict

TASKS = ("pos", "ner", "con", "dep")
MODES = ("ls", "lt", "pt")
VARIANTS = ("default", TABLE1_PROFILE, "dec-lex", "inc-vrb")


@dataclass(frozen=True)
class SchemaConfig:
    task: str
    mode: str
    variant: str = "default"
    profile: str | None = None  # dictionary profile override

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown schema mode {self.mode!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "dec-lex" and self.task not in ("pos", "dep"):
            raise ValueError("decreased lexicality applies to pos and dep only")
        if self.variant == "inc-vrb" and self.task not in ("ner", "con"):
            raise ValueError("increased verbosity applies to ner and con only")

    @property
    def dictionary(self) -> DescriptionDict:
        profile = self.profile or (
            TABLE1_PROFILE if self.variant == TABLE1_PROFILE else DEFAULT_PROFILE
        )
        d = description_dict(self.task, profile)
        if self.variant == "dec-lex":
            d = d.decreased_lexicality()
        return d

    @property
    def include_root(self) -> bool:
        return self.variant != TABLE1_PROFILE

    @property
    def verbose(self) -> bool:
        return self.variant == "inc-vrb"


def linearize(config: SchemaConfig, sent: Sentence, gold: Structure) -> OutputSequence:
    d = config.dictionary
    if config.task == "pos":
        return pos.linearize_pos(sent, gold, config.mode, d)
    if config.task == "ner":
        return ner.linearize_ner(sent, gold, config.mode, d, verbose=config.verbose)
    if config.task == "con":
        if config.mode == "pt":
            return con.linearize_con_pt(sent, gold, d, which=not config.verbose)
        return con.linearize_con(sent, gold, config.mode)
    return dep.linearize_dep(sent, gold, config.mode, d, include_root=config.include_root)


def delinearize(
    config: SchemaConfig, sent: Sentence, out: OutputSequence, lenient: bool = False
) -> Structure:
    d = config.dictionary
    if config.task == "pos":
        return pos.delinearize_pos(sent, out, config.mode, d, lenient=lenient)
    if config.task == "ner":
        return ner.delinearize_ner(sent, out, config.mode, d, lenient=lenient, verbose=config.verbose)
    if config.task == "con":
        if config.mode == "pt":
            return con.reverse_con_pt(sent, out, d, strict=not lenient)
        return con.delinearize_con(sent, out, config.mode, lenient=lenient)
    return dep.delinearize_dep(
        sent, out, config.mode, d, lenient=lenient, include_root=config.include_root
    )


def automaton(config: SchemaConfig, sent: Sentence) -> SchemaAutomaton:
    """Fresh constrained-decoding automaton, or None for constituents."""
    d = config.dictionary
    if config.task == "pos":
        return pos.pos_automaton(sent, config.mode, d)
    if config.task == "ner":
        return ner.ner_automaton(sent, config.mode, d, verbose=config.verbose)
    if config.task == "dep":
        return dep.dep_automaton(sent, config.mode, d, include_root=config.include_root)
    return None
