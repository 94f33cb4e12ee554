"""Qualitative parity objectives on Markov decision processes.

Decide whether one strategy satisfies a Boolean combination of sure,
almost-sure, non-zero and existential parity objectives, synthesize such a
strategy, and simulate it.
"""

from .api import QualitativeSolver
from .decide import InvariantViolation, Verdict, decide_clause, decide_formula, encode_sat
from .model import Mdp, ParityMap, format_mdp, parse_mdp, restrict, validate
from .qpl import Clause, clauses_of, parse, to_negation_free
from .synth import synthesize_clause

__version__ = "0.1.0"

__all__ = [
    "Clause",
    "InvariantViolation",
    "Mdp",
    "ParityMap",
    "QualitativeSolver",
    "Verdict",
    "clauses_of",
    "decide_clause",
    "decide_formula",
    "encode_sat",
    "format_mdp",
    "parse",
    "parse_mdp",
    "restrict",
    "synthesize_clause",
    "to_negation_free",
    "validate",
]
