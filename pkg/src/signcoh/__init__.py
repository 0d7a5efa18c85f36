"""Exact mutation of exchange matrices and the sign patterns of their frozen rows."""

from .errors import DomainError, FalsificationError, HorizonExceeded
from .exchange import (
    SeedNode,
    balance_diagnostics,
    distance,
    is_monotone_prefix,
    random_sequence,
)
from .mutation import (
    ExchangeMatrix,
    find_skew_symmetrizer,
    is_irreducible,
    mutate,
    mutate_sequence,
    with_principal_coefficients,
)
from .rank2 import Rank2Config, classify, closed_form, rank2_trace, verify_rank2
from .signs import SignVector, approx_matches, detect_stabilization, sign_trace, sign_vector

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "FalsificationError",
    "HorizonExceeded",
    "ExchangeMatrix",
    "mutate",
    "mutate_sequence",
    "find_skew_symmetrizer",
    "is_irreducible",
    "with_principal_coefficients",
    "SignVector",
    "sign_vector",
    "sign_trace",
    "approx_matches",
    "detect_stabilization",
    "SeedNode",
    "distance",
    "is_monotone_prefix",
    "balance_diagnostics",
    "random_sequence",
    "Rank2Config",
    "rank2_trace",
    "classify",
    "closed_form",
    "verify_rank2",
]
