"""First-order logic of evidence and truth: parsing, proof checking,
non-deterministic finite-model semantics and countermodel search."""

from .proof import PROFILES, CheckReport, RuleId, check_derivation, get_profile, parse_proof
from .search import CapHit, Countermodel, Exhausted, SearchConfig, enumerate_structures, find_countermodel
from .semantics import (
    ChoiceAssignment, ChoiceAtom, Interpretation, PredInterp, Structure, closure,
    enumerate_valuations, evaluate, parse_choices, parse_structure, validate_structure,
)
from .sexpr import ParseError
from .syntax import (
    Signature, alphabetic_variant_eq, canonicalize, parse_formula, parse_sentence,
    parse_signature, substitute,
)

__version__ = "0.1.0"

__all__ = [
    "PROFILES", "CapHit", "CheckReport", "ChoiceAssignment", "ChoiceAtom", "Countermodel",
    "Exhausted", "Interpretation", "ParseError", "PredInterp", "RuleId", "SearchConfig",
    "Signature", "Structure", "alphabetic_variant_eq", "canonicalize", "check_derivation",
    "closure", "enumerate_structures", "enumerate_valuations", "evaluate", "find_countermodel",
    "get_profile", "parse_choices", "parse_formula", "parse_proof", "parse_sentence",
    "parse_signature", "parse_structure", "substitute", "validate_structure",
]
