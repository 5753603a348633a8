"""Non-redundant random generation of words from weighted context-free grammars."""

__version__ = "0.1.0"

from .bcnf import to_bcnf
from .errors import (AttemptCapExceeded, ExhaustedError, GrammarSyntaxError, GrammarValidationError,
                     NotInLanguageError, NrgenError, RankOutOfRangeError)
from .grammar import WeightedGrammar, load_grammar, parse_grammar, serialize_grammar, validate
from .oracle import ambiguity_probe, enumerate_words
from .session import (GeneratedSet, SessionConfig, expected_attempts_uniform, generate_distinct,
                      naive_rejection, rejection_blowup_stats, set_probability)
from .unranking import RankInterval, rank, unrank
from .weights import WeightTable, build_weight_table, scale_to_integer, table_for, word_probability, word_weight

__all__ = [
    "AttemptCapExceeded", "ExhaustedError", "GeneratedSet", "GrammarSyntaxError", "GrammarValidationError",
    "NotInLanguageError", "NrgenError", "RankInterval", "RankOutOfRangeError", "SessionConfig",
    "WeightTable", "WeightedGrammar", "ambiguity_probe", "build_weight_table", "enumerate_words",
    "expected_attempts_uniform", "generate_distinct", "load_grammar", "naive_rejection", "parse_grammar",
    "rank", "rejection_blowup_stats", "scale_to_integer", "serialize_grammar", "set_probability",
    "table_for", "to_bcnf", "unrank", "validate", "word_probability", "word_weight",
]
