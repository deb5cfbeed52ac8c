"""parseq: linguistic structures as lexically graded text schemas.

Convert tag sequences, entity sets, constituency trees, and dependency trees
to and from three output schemas (label sequence, label-with-text, prompt),
and keep token-by-token generation inside each schema with candidate-set
automata driven by any next-token scorer.
"""

from .core import (
    EOS,
    ConNode,
    ConTree,
    DepTree,
    DescriptionDict,
    Entity,
    EntitySet,
    MalformedOutputError,
    OutputSequence,
    PosSequence,
    Sentence,
    StructureError,
    from_canonical_json,
    is_projective,
    load_description_dict,
    to_canonical_json,
    validate_structure,
)
from .decode import (
    DecodeConfig,
    ExternalScorer,
    OracleScorer,
    RandomScorer,
    UniformScorer,
    decode,
    external_scorer,
    oracle_scorer,
)
from .metrics import EvalReport, FactorConfig, bracket_f1, ner_span_f1, pos_accuracy, stratify, uas_las
from .profiles import description_dict
from .schemas import SchemaConfig, automaton, delinearize, linearize
from .trie import TokenTrie

__version__ = "0.1.0"
