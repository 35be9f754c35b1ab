"""Free polynomials, identity parsing and identity checking."""
from .check import (
    METHODS,
    GenericEvaluator,
    IdentityVerdict,
    MethodError,
    Witness,
    check_identity,
    evaluate,
    evaluate_batch,
    find_witness,
    format_vector,
    span_applicable,
    witness_value,
)
from .freepoly import IDENTITY_NAMES, FreePoly, ParseError, identity_text, paper_identity, parse_poly

__all__ = [
    "IDENTITY_NAMES",
    "METHODS",
    "FreePoly",
    "GenericEvaluator",
    "IdentityVerdict",
    "MethodError",
    "ParseError",
    "Witness",
    "check_identity",
    "evaluate",
    "evaluate_batch",
    "find_witness",
    "format_vector",
    "identity_text",
    "paper_identity",
    "parse_poly",
    "span_applicable",
    "witness_value",
]
