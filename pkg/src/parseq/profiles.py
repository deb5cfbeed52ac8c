"""Bundled description-dictionary profiles for all four tasks.

Profiles are plain key/value config documents fed through the standard
loader, so user-supplied configs go through exactly the same validation.
The ``paper-table-1`` profile reproduces a published worked example; the
``default`` profiles carry fuller glosses.
"""
from __future__ import annotations

from .core import DescriptionDict, DictLoadError, load_description_dict

POS_DEFAULT = """
# Penn Treebank part-of-speech tags
CC    = a coordinating conjunction
CD    = a cardinal number
DT    = a determiner
EX    = an existential there
FW    = a foreign word
IN    = a preposition or subordinating conjunction
JJ    = an adjective
JJR   = a comparative adjective
JJS   = a superlative adjective
LS    = a list item marker
MD    = a modal
NN    = a noun
NNS   = a plural noun
NNP   = a proper noun
NNPS  = a plural proper noun
PDT   = a predeterminer
POS   = a possessive ending
PRP   = a personal pronoun
PRP$  = a possessive pronoun
RB    = an adverb
RBR   = a comparative adverb
RBS   = a superlative adverb
RP    = a particle
SYM   = a symbol
TO    = an infinitival to
UH    = an interjection
VB    = a base form verb
VBD   = a past tense verb
VBG   = a gerund verb
VBN   = a past participle verb
VBP   = a non-3rd person singular present verb
VBZ   = a 3rd person singular present verb
WDT   = a wh-determiner
WP    = a wh-pronoun
WP$   = a possessive wh-pronoun
WRB   = a wh-adverb
.     = a period
,     = a comma
:     = a colon
$     = a dollar sign
#     = a pound sign
``    = an opening quotation mark
''    = a closing quotation mark
-LRB- = a left bracket
-RRB- = a right bracket
"""

# Compact glosses used by the worked example this package reproduces.
POS_TABLE1_OVERRIDES = """
NN   = a noun
NNS  = a plural noun
VBZ  = a 3rd-person present verb
VBD  = a past verb
IN   = a preposition
"""

NER_ONTONOTES = """
PERSON      = a person
NORP        = a nationality, religious or political group
FAC         = a facility
ORG         = an organization
GPE         = a geopolitical entity
LOC         = a location
PRODUCT     = a product
EVENT       = an event
WORK_OF_ART = a work of art
LAW         = a law
LANGUAGE    = a language
DATE        = a date
TIME        = a time
PERCENT     = a percentage
MONEY       = a monetary amount
QUANTITY    = a quantity
ORDINAL     = an ordinal number
CARDINAL    = a cardinal number
"""

NER_CONLL03 = """
PER  = a person
ORG  = an organization
LOC  = a location
MISC = a miscellaneous entity
"""

# The worked example renders NORP as "geopolitical entity", which collides
# with the usual GPE gloss, so GPE is re-glossed under this profile.
NER_TABLE1_OVERRIDES = """
NORP = a geopolitical entity
GPE  = a geopolitical region
"""

CON_DEFAULT = """
# Penn Treebank constituent labels (TOP excluded; it is never described)
S      = a clause
SBAR   = a subordinating clause
SBARQ  = a direct question
SINV   = an inverted clause
SQ     = an inverted question
ADJP   = an adjective phrase
ADVP   = an adverb phrase
CONJP  = a conjunction phrase
FRAG   = a fragment
INTJ   = an interjection phrase
LST    = a list marker
NAC    = a noun adjunct cluster
NP     = a noun phrase
NX     = a noun complex
PP     = a preposition phrase
PRN    = a parenthetical
PRT    = a particle phrase
QP     = a quantifier phrase
RRC    = a reduced relative clause
UCP    = an unlike coordinated phrase
VP     = a verb phrase
WHADJP = a wh-adjective phrase
WHADVP = a wh-adverb phrase
WHNP   = a wh-noun phrase
WHPP   = a wh-preposition phrase
X      = an unknown constituent
"""

DEP_DEFAULT = """
root      = a root
nsubj     = a nominal subject
nsubjpass = a passive nominal subject
csubj     = a clausal subject
obj       = an object
dobj      = a direct object
iobj      = an indirect object
obl       = an oblique
ccomp     = a clausal complement
xcomp     = an open clausal complement
det       = a determiner
poss      = a possessive modifier
case      = a case marker
mark      = a subordinating marker
amod      = an adjectival modifier
advmod    = an adverbial modifier
nmod      = a nominal modifier
nummod    = a numeric modifier
appos     = an apposition
compound  = a compound word
conj      = a conjunct
cc        = a coordinating conjunction
cop       = a copula
aux       = an auxiliary
auxpass   = a passive auxiliary
neg       = a negation modifier
punct     = a punctuation
relcl     = a relative clause
acl       = an adnominal clause
advcl     = an adverbial clause
parataxis = a parataxis
expl      = an expletive
discourse = a discourse element
vocative  = a vocative
dep       = a dependent
"""

#: Surface token used for the artificial root operand in DEP prompts and for
#: the whole-sentence constituent in CON prompts.
SENTENCE_WORD = "sentence"

DEFAULT_PROFILE = "default"
TABLE1_PROFILE = "paper-table-1"
CONLL03_PROFILE = "conll03"

PROFILE_NAMES = (DEFAULT_PROFILE, TABLE1_PROFILE, CONLL03_PROFILE)


def _overridden(base: DescriptionDict, overrides: str) -> DescriptionDict:
    extra = load_description_dict(base.task, overrides)
    return base.with_overrides(extra.entries)


def description_dict(task: str, profile: str = DEFAULT_PROFILE) -> DescriptionDict:
    """Return the bundled dictionary for ``task`` under ``profile``."""
    task = task.lower()
    if task == "pos":
        base = load_description_dict("pos", POS_DEFAULT, default_label="NN")
        if profile == TABLE1_PROFILE:
            return _overridden(base, POS_TABLE1_OVERRIDES)
        if profile in (DEFAULT_PROFILE, CONLL03_PROFILE):
            return base
    elif task == "ner":
        if profile == CONLL03_PROFILE:
            return load_description_dict("ner", NER_CONLL03)
        base = load_description_dict("ner", NER_ONTONOTES)
        if profile == TABLE1_PROFILE:
            return _overridden(base, NER_TABLE1_OVERRIDES)
        if profile == DEFAULT_PROFILE:
            return base
    elif task == "con":
        if profile in PROFILE_NAMES:
            return load_description_dict("con", CON_DEFAULT)
    elif task == "dep":
        if profile in PROFILE_NAMES:
            return load_description_dict("dep", DEP_DEFAULT, default_label="dep")
    else:
        raise DictLoadError(f"unknown task {task!r}")
    raise DictLoadError(f"unknown profile {profile!r} for task {task!r}")
